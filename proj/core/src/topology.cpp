#include "lorafall/topology.hpp"

#include <cmath>

namespace lorafall {

int Topology::alive_aps() const {
  int n = 0;
  for (bool a : ap_alive) n += a ? 1 : 0;
  return n;
}

Topology build_topology(const ScenarioConfig& config) {
  Topology t;
  t.n_servers = config.n_servers;
  t.n_gateways = config.n_gateways;
  t.n_aps = config.n_aps;
  t.n_users = config.n_users;
  t.links.reserve(static_cast<std::size_t>(config.total_links()));
  int id = 0;
  t.links.push_back({id++, LinkRole::CoreToAppServer, 0, 0});
  for (int s = 0; s < t.n_servers; ++s)
    t.links.push_back({id++, LinkRole::CoreToSubServer, 0, s});
  for (int g = 0; g < t.n_gateways; ++g)
    t.links.push_back({id++, LinkRole::SubServerToGateway, t.server_of_gateway(g), g});
  for (int a = 0; a < t.n_aps; ++a)
    t.links.push_back({id++, LinkRole::CoreToAp, 0, a});
  for (int u = 0; u < t.n_users; ++u)
    t.links.push_back({id++, LinkRole::UserAccess, t.gateway_of_user(u), u});
  t.ap_alive.assign(static_cast<std::size_t>(t.n_aps), true);
  return t;
}

int fail_access_points(Topology& topo, double fraction) {
  int failed = static_cast<int>(std::floor(fraction * topo.n_aps));
  for (int a = 0; a < topo.n_aps; ++a) topo.ap_alive[a] = a >= failed;
  return failed;
}

int count_active_links(const Topology& topo, std::span<const Route> active_routes) {
  std::vector<bool> seen(topo.links.size(), false);
  int n = 0;
  for (const Route& r : active_routes) {
    for (int link : r) {
      if (link >= 0 && link < static_cast<int>(seen.size()) && !seen[link]) {
        seen[link] = true;
        ++n;
      }
    }
  }
  return n;
}

}  // namespace lorafall
