#ifndef LORAFALL_TOPOLOGY_HPP_
#define LORAFALL_TOPOLOGY_HPP_

#include <span>
#include <vector>

#include "lorafall/config.hpp"

namespace lorafall {

enum class LinkRole {
  CoreToAppServer,
  CoreToSubServer,
  SubServerToGateway,
  CoreToAp,
  UserAccess,
};

struct Link {
  int id;
  LinkRole role;
  int endpoint_a;  // index within the role's upstream tier
  int endpoint_b;  // index within the role's downstream tier
};

// A route is the set of link ids an application's traffic touches.
using Route = std::vector<int>;

// Link ids are laid out deterministically:
//   [0]                      core <-> application server
//   [1 .. B]                 core <-> sub-network server
//   [B+1 .. B+L]             sub-server <-> gateway (gateways round-robin over servers)
//   [B+L+1 .. B+L+S]         core <-> access point
//   [B+L+S+1 .. B+L+S+E]     user access (users round-robin over gateways)
struct Topology {
  int n_servers = 0;
  int n_gateways = 0;
  int n_aps = 0;
  int n_users = 0;
  std::vector<Link> links;
  std::vector<bool> ap_alive;

  int core_app_link() const { return 0; }
  int server_link(int s) const { return 1 + s; }
  int gateway_link(int g) const { return 1 + n_servers + g; }
  int ap_link(int a) const { return 1 + n_servers + n_gateways + a; }
  int user_link(int u) const { return 1 + n_servers + n_gateways + n_aps + u; }
  int total_links() const { return static_cast<int>(links.size()); }
  int server_of_gateway(int g) const { return g % n_servers; }
  int gateway_of_user(int u) const { return u % n_gateways; }
  int alive_aps() const;
};

Topology build_topology(const ScenarioConfig& config);

// Marks the first floor(fraction * |S|) access points (by id) as failed.
// Returns the number of failed APs.
int fail_access_points(Topology& topo, double fraction);

// Number of distinct links touched by at least one active route.
int count_active_links(const Topology& topo, std::span<const Route> active_routes);

}  // namespace lorafall

#endif  // LORAFALL_TOPOLOGY_HPP_
