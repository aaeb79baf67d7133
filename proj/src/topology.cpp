#include "afrsa/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "afrsa/errors.hpp"

namespace afrsa {

int Topology::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i] == name) return static_cast<int>(i);
  return -1;
}

int Topology::link_index(int link_id) const {
  for (std::size_t i = 0; i < links.size(); ++i)
    if (links[i].id == link_id) return static_cast<int>(i);
  return -1;
}

bool Topology::weighted() const {
  if (links.empty()) return false;
  for (const Link& l : links)
    if (!l.length) return false;
  return true;
}

double Topology::link_weight(int link_idx) const {
  if (weighted()) return *links[static_cast<std::size_t>(link_idx)].length;
  return 1.0;
}

void Topology::validate() const {
  if (nodes.empty()) throw ConfigError("topology has no nodes");
  if (slots_per_link < 1)
    throw ConfigError("topology requires slots_per_link >= 1");
  std::set<std::string> names(nodes.begin(), nodes.end());
  if (names.size() != nodes.size())
    throw ConfigError("topology has duplicate node names");
  std::set<int> ids;
  for (const Link& l : links) {
    if (l.a < 0 || l.a >= static_cast<int>(nodes.size()) || l.b < 0 ||
        l.b >= static_cast<int>(nodes.size()))
      throw ConfigError("link endpoint references a missing node");
    if (l.a == l.b) throw ConfigError("self-loop link is not allowed");
    if (!ids.insert(l.id).second) throw ConfigError("duplicate link id");
    if (l.length && !(*l.length >= 0.0))
      throw ConfigError("link length must be nonnegative");
  }
}

namespace {

struct Adj {
  int link;  // link index
  int to;    // node index
};

std::vector<std::vector<Adj>> adjacency(const Topology& t) {
  std::vector<std::vector<Adj>> adj(t.nodes.size());
  for (std::size_t idx = 0; idx < t.links.size(); ++idx) {
    const Link& l = t.links[idx];
    adj[static_cast<std::size_t>(l.a)].push_back({static_cast<int>(idx), l.b});
    adj[static_cast<std::size_t>(l.b)].push_back({static_cast<int>(idx), l.a});
  }
  for (auto& v : adj)
    std::sort(v.begin(), v.end(), [&](const Adj& x, const Adj& y) {
      return t.links[static_cast<std::size_t>(x.link)].id <
             t.links[static_cast<std::size_t>(y.link)].id;
    });
  return adj;
}

std::vector<double> dijkstra(const Topology& t,
                             const std::vector<std::vector<Adj>>& adj,
                             int src) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(t.nodes.size(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[static_cast<std::size_t>(src)] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const Adj& e : adj[static_cast<std::size_t>(u)]) {
      const double nd = d + t.link_weight(e.link);
      if (nd < dist[static_cast<std::size_t>(e.to)]) {
        dist[static_cast<std::size_t>(e.to)] = nd;
        pq.push({nd, e.to});
      }
    }
  }
  return dist;
}

// Depth-first construction of the lexicographically smallest minimum-cost
// simple path: link ids are explored in ascending order, pruned by the
// admissible remaining-distance bound, so the first complete path found is
// the lexicographic minimum.
bool lex_path_dfs(const Topology& t, const std::vector<std::vector<Adj>>& adj,
                  const std::vector<double>& dist_to_dst, int u, int dst,
                  double cost, double total, double tol,
                  std::vector<char>& visited, std::vector<int>& out_links) {
  if (u == dst) return std::abs(cost - total) <= tol;
  for (const Adj& e : adj[static_cast<std::size_t>(u)]) {
    if (visited[static_cast<std::size_t>(e.to)]) continue;
    const double c2 = cost + t.link_weight(e.link);
    if (c2 + dist_to_dst[static_cast<std::size_t>(e.to)] > total + tol) continue;
    visited[static_cast<std::size_t>(e.to)] = 1;
    out_links.push_back(e.link);
    if (lex_path_dfs(t, adj, dist_to_dst, e.to, dst, c2, total, tol, visited,
                     out_links))
      return true;
    out_links.pop_back();
    visited[static_cast<std::size_t>(e.to)] = 0;
  }
  return false;
}

}  // namespace

Route shortest_route(const Topology& topo, int source, int destination) {
  const int nn = static_cast<int>(topo.nodes.size());
  if (source < 0 || source >= nn || destination < 0 || destination >= nn)
    throw ConfigError("shortest_route endpoint out of range");

  Route r;
  r.source = source;
  r.destination = destination;
  if (source == destination) return r;

  const auto adj = adjacency(topo);
  const auto dist_to_dst = dijkstra(topo, adj, destination);
  const double total = dist_to_dst[static_cast<std::size_t>(source)];
  if (!std::isfinite(total))
    throw NoPathError("no path between " + topo.nodes[static_cast<std::size_t>(source)] +
                      " and " + topo.nodes[static_cast<std::size_t>(destination)]);

  const double tol = 1e-9 * std::max(1.0, total);
  std::vector<char> visited(topo.nodes.size(), 0);
  visited[static_cast<std::size_t>(source)] = 1;
  std::vector<int> link_idxs;
  if (!lex_path_dfs(topo, adj, dist_to_dst, source, destination, 0.0, total,
                    tol, visited, link_idxs))
    throw NoPathError("no simple path at the shortest cost");  // not reachable

  r.link_ids.reserve(link_idxs.size());
  for (int idx : link_idxs)
    r.link_ids.push_back(topo.links[static_cast<std::size_t>(idx)].id);
  return r;
}

std::vector<Route> compute_routes(const Topology& topo,
                                  const std::vector<ConnectionRequest>& conns) {
  std::vector<Route> routes;
  routes.reserve(conns.size());
  for (const ConnectionRequest& c : conns) {
    Route r = shortest_route(topo, c.source, c.destination);
    r.connection_id = c.id;
    routes.push_back(std::move(r));
  }
  return routes;
}

bool route_is_valid(const Topology& topo, const Route& route) {
  if (route.source == route.destination) return route.link_ids.empty();
  std::unordered_set<int> seen_links;
  std::unordered_set<int> seen_nodes;
  int cur = route.source;
  seen_nodes.insert(cur);
  for (int lid : route.link_ids) {
    const int idx = topo.link_index(lid);
    if (idx < 0) return false;
    if (!seen_links.insert(lid).second) return false;
    const Link& l = topo.links[static_cast<std::size_t>(idx)];
    int next;
    if (l.a == cur)
      next = l.b;
    else if (l.b == cur)
      next = l.a;
    else
      return false;
    if (!seen_nodes.insert(next).second) return false;
    cur = next;
  }
  return cur == route.destination;
}

int LinkUtilizationMatrix::contention(int l) const {
  int c = 0;
  for (int i = 0; i < n; ++i)
    if (uses(i, l)) ++c;
  return c;
}

LinkUtilizationMatrix build_link_utilization(const std::vector<Route>& routes,
                                             const Topology& topo,
                                             int expected_n) {
  if (static_cast<int>(routes.size()) != expected_n)
    throw DimensionMismatchError("expected one route per connection");
  LinkUtilizationMatrix p;
  p.n = expected_n;
  p.k = static_cast<int>(topo.links.size());
  p.cell.assign(static_cast<std::size_t>(p.n) * p.k, 0);
  p.route_links.resize(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    for (int lid : routes[static_cast<std::size_t>(i)].link_ids) {
      const int idx = topo.link_index(lid);
      if (idx < 0) throw ConfigError("route references an unknown link id");
      p.cell[static_cast<std::size_t>(i) * p.k + idx] = 1;
      p.route_links[static_cast<std::size_t>(i)].push_back(idx);
    }
  }
  return p;
}

Topology topology_from_json(const nlohmann::json& j) {
  Topology t;
  try {
    for (const auto& v : j.at("nodes")) t.nodes.push_back(v.get<std::string>());
    for (const auto& v : j.at("links")) {
      Link l;
      l.id = v.at("id").get<int>();
      const int a = t.node_index(v.at("a").get<std::string>());
      const int b = t.node_index(v.at("b").get<std::string>());
      if (a < 0 || b < 0) throw ConfigError("link endpoint names an unknown node");
      l.a = a;
      l.b = b;
      if (v.contains("length")) l.length = v.at("length").get<double>();
      t.links.push_back(l);
    }
    t.slots_per_link = j.at("slots_per_link").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad topology json: ") + e.what());
  }
  t.validate();
  return t;
}

nlohmann::json topology_to_json(const Topology& topo) {
  nlohmann::ordered_json j;
  j["nodes"] = topo.nodes;
  j["links"] = nlohmann::json::array();
  for (const Link& l : topo.links) {
    nlohmann::ordered_json lj;
    lj["id"] = l.id;
    lj["a"] = topo.nodes[static_cast<std::size_t>(l.a)];
    lj["b"] = topo.nodes[static_cast<std::size_t>(l.b)];
    if (l.length) lj["length"] = *l.length;
    j["links"].push_back(lj);
  }
  j["slots_per_link"] = topo.slots_per_link;
  return j;
}

Topology load_topology_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open topology file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse topology file: ") + e.what());
  }
  return topology_from_json(j);
}

std::vector<ConnectionRequest> connections_from_json(const nlohmann::json& j,
                                                     const Topology& topo) {
  std::vector<ConnectionRequest> conns;
  try {
    for (const auto& v : j) {
      ConnectionRequest c;
      c.id = v.at("id").get<int>();
      c.source = topo.node_index(v.at("source").get<std::string>());
      c.destination = topo.node_index(v.at("destination").get<std::string>());
      if (c.source < 0 || c.destination < 0)
        throw ConfigError("connection names an unknown node");
      if (c.source == c.destination)
        throw ConfigError("connection source equals destination");
      c.traffic.mu = v.at("traffic").at("mu").get<double>();
      c.traffic.sigma2 = v.at("traffic").at("sigma2").get<double>();
      c.traffic.cap = topo.slots_per_link;
      conns.push_back(c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad connections json: ") + e.what());
  }
  std::sort(conns.begin(), conns.end(),
            [](const ConnectionRequest& a, const ConnectionRequest& b) {
              return a.id < b.id;
            });
  for (std::size_t i = 0; i < conns.size(); ++i)
    if (conns[i].id != static_cast<int>(i))
      throw ConfigError("connection ids must be 0..n-1 and unique");
  return conns;
}

nlohmann::json connections_to_json(const std::vector<ConnectionRequest>& conns,
                                   const Topology& topo) {
  nlohmann::ordered_json j = nlohmann::json::array();
  for (const ConnectionRequest& c : conns) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["source"] = topo.nodes[static_cast<std::size_t>(c.source)];
    cj["destination"] = topo.nodes[static_cast<std::size_t>(c.destination)];
    cj["traffic"] = {{"mu", c.traffic.mu}, {"sigma2", c.traffic.sigma2}};
    j.push_back(cj);
  }
  return j;
}

std::vector<ConnectionRequest> load_connections_file(const std::string& path,
                                                     const Topology& topo) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open connections file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("cannot parse connections file: ") + e.what());
  }
  return connections_from_json(j, topo);
}

Topology dt14_topology(int slots_per_link) {
  // Reference German backbone: 14 nodes, 23 links, lengths in km.
  Topology t;
  t.nodes = {"Berlin",    "Bremen",  "Dortmund", "Duesseldorf", "Essen",
             "Frankfurt", "Hamburg", "Hannover", "Koeln",       "Leipzig",
             "Muenchen",  "Norden",  "Nuernberg", "Stuttgart"};
  struct E {
    const char* a;
    const char* b;
    double km;
  };
  static const E edges[] = {
      {"Berlin", "Hamburg", 291},      {"Berlin", "Hannover", 258},
      {"Berlin", "Leipzig", 165},      {"Bremen", "Hamburg", 95},
      {"Bremen", "Hannover", 100},     {"Bremen", "Norden", 150},
      {"Dortmund", "Essen", 35},       {"Dortmund", "Hannover", 180},
      {"Dortmund", "Koeln", 75},       {"Dortmund", "Norden", 185},
      {"Duesseldorf", "Essen", 35},    {"Duesseldorf", "Koeln", 40},
      {"Frankfurt", "Hannover", 285},  {"Frankfurt", "Koeln", 150},
      {"Frankfurt", "Leipzig", 320},   {"Frankfurt", "Nuernberg", 190},
      {"Frankfurt", "Stuttgart", 180}, {"Hamburg", "Hannover", 140},
      {"Hannover", "Leipzig", 215},    {"Leipzig", "Nuernberg", 230},
      {"Muenchen", "Nuernberg", 150},  {"Muenchen", "Stuttgart", 190},
      {"Nuernberg", "Stuttgart", 160},
  };
  int id = 0;
  for (const E& e : edges) {
    Link l;
    l.id = id++;
    l.a = t.node_index(e.a);
    l.b = t.node_index(e.b);
    l.length = e.km;
    t.links.push_back(l);
  }
  t.slots_per_link = slots_per_link;
  t.validate();
  return t;
}

}  // namespace afrsa
