#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "afrsa/traffic.hpp"

namespace afrsa {

struct Link {
  int id = 0;
  int a = 0;  // node index
  int b = 0;  // node index
  std::optional<double> length;
};

// Network graph with a uniform slot count per link. Immutable after
// construction; safe to share read-only across concurrent solver runs.
struct Topology {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  int slots_per_link = 0;

  int node_index(const std::string& name) const;  // -1 if absent
  int link_index(int link_id) const;              // -1 if absent

  // True when every link carries a length; routing then minimizes total
  // length, otherwise hop count.
  bool weighted() const;
  double link_weight(int link_idx) const;

  void validate() const;  // throws ConfigError on any invariant violation
};

struct ConnectionRequest {
  int id = 0;
  int source = 0;       // node index
  int destination = 0;  // node index
  TrafficModel traffic;
};

struct Route {
  int connection_id = -1;
  int source = -1;
  int destination = -1;
  std::vector<int> link_ids;  // external link ids, in path order
};

// Minimum-cost simple path; ties broken by the lexicographically smallest
// sequence of link ids. Throws NoPathError when disconnected.
Route shortest_route(const Topology& topo, int source, int destination);

std::vector<Route> compute_routes(const Topology& topo,
                                  const std::vector<ConnectionRequest>& conns);

// Walks the route and checks it is a simple path source -> destination.
bool route_is_valid(const Topology& topo, const Route& route);

// Binary n x k incidence of connections onto links (columns follow the
// topology's link order).
struct LinkUtilizationMatrix {
  int n = 0;
  int k = 0;
  std::vector<std::uint8_t> cell;              // row-major
  std::vector<std::vector<int>> route_links;   // link indices per connection

  bool uses(int i, int l) const {
    return cell[static_cast<std::size_t>(i) * k + l] != 0;
  }
  int hops(int i) const {
    return static_cast<int>(route_links[static_cast<std::size_t>(i)].size());
  }
  int contention(int l) const;  // column sum
};

LinkUtilizationMatrix build_link_utilization(const std::vector<Route>& routes,
                                             const Topology& topo,
                                             int expected_n);

// JSON file formats.
Topology topology_from_json(const nlohmann::json& j);
nlohmann::json topology_to_json(const Topology& topo);
Topology load_topology_file(const std::string& path);

std::vector<ConnectionRequest> connections_from_json(const nlohmann::json& j,
                                                     const Topology& topo);
nlohmann::json connections_to_json(const std::vector<ConnectionRequest>& conns,
                                   const Topology& topo);
std::vector<ConnectionRequest> load_connections_file(const std::string& path,
                                                     const Topology& topo);

// Bundled 14-node / 23-link German backbone reference topology.
Topology dt14_topology(int slots_per_link = 100);

}  // namespace afrsa
