#include "graphpde/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace graphpde {

WeightedGraph::WeightedGraph(std::vector<VertexId> ids, std::vector<double> measure,
                             const std::vector<Edge>& edges)
    : ids_(std::move(ids)), mu_(std::move(measure)) {
  const int n = static_cast<int>(ids_.size());
  if (static_cast<int>(mu_.size()) != n)
    throw std::invalid_argument("WeightedGraph: measure size mismatch");
  w_ = Matrix(n, n, 0.0);
  for (const auto& e : edges) {
    if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
      throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
    w_(e.i, e.j) = e.w;
    w_(e.j, e.i) = e.w;
  }
}

WeightedGraph WeightedGraph::raw(std::vector<VertexId> ids, std::vector<double> measure,
                                 Matrix weights) {
  WeightedGraph g;
  g.ids_ = std::move(ids);
  g.mu_ = std::move(measure);
  g.w_ = std::move(weights);
  return g;
}

int WeightedGraph::index_of(const VertexId& id) const {
  for (int i = 0; i < size(); ++i)
    if (ids_[i] == id) return i;
  return -1;
}

double WeightedGraph::weighted_degree(int x) const {
  double s = 0.0;
  for (int y = 0; y < size(); ++y) s += w_(x, y);
  return s;
}

double WeightedGraph::volume() const {
  double s = 0.0;
  for (double m : mu_) s += m;
  return s;
}

namespace {
// BFS over edges with positive weight in either direction, restricted to `mask`.
bool bfs_connected(const WeightedGraph& g, const std::vector<char>& mask) {
  const int n = g.size();
  int start = -1, total = 0;
  for (int i = 0; i < n; ++i)
    if (mask[i]) {
      if (start < 0) start = i;
      ++total;
    }
  if (total == 0) return false;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{start};
  seen[start] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y = 0; y < n; ++y) {
      if (!mask[y] || seen[y]) continue;
      if (g.weight(x, y) > 0.0 || g.weight(y, x) > 0.0) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  return reached == total;
}
}  // namespace

bool WeightedGraph::connected() const {
  if (size() == 0) return false;
  return bfs_connected(*this, std::vector<char>(size(), 1));
}

bool WeightedGraph::connected_on(std::span<const int> subset) const {
  std::vector<char> mask(size(), 0);
  for (int v : subset) mask[v] = 1;
  return bfs_connected(*this, mask);
}

DomainPartition::DomainPartition(const WeightedGraph& g, const std::vector<Role>& roles) {
  const int n = g.size();
  if (static_cast<int>(roles.size()) != n)
    throw std::invalid_argument("DomainPartition: role list size mismatch");
  role_.assign(n, 0);
  ipos_.assign(n, -1);
  bpos_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (roles[v] == Role::Interior) {
      role_[v] = 0;
      ipos_[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    } else {
      role_[v] = 1;
      bpos_[v] = static_cast<int>(boundary_.size());
      boundary_.push_back(v);
    }
  }
}

ValidationReport validate(const WeightedGraph& g, const DomainPartition* p) {
  ValidationReport r;
  const int n = g.size();
  if (n == 0) {
    r.violations.push_back("graph has no vertices");
    return r;
  }
  for (int i = 0; i < n; ++i) {
    if (!(g.measure(i) > 0.0))
      r.violations.push_back("measure not positive at vertex " + g.id(i));
    if (g.weight(i, i) != 0.0)
      r.violations.push_back("self-loop at vertex " + g.id(i));
    for (int j = i + 1; j < n; ++j) {
      if (g.weight(i, j) != g.weight(j, i))
        r.violations.push_back("asymmetric weight between " + g.id(i) + " and " + g.id(j));
      if (g.weight(i, j) < 0.0 || g.weight(j, i) < 0.0)
        r.violations.push_back("negative weight between " + g.id(i) + " and " + g.id(j));
    }
  }
  if (!g.connected()) r.violations.push_back("graph is not connected");

  if (p) {
    if (p->boundary().empty())
      r.violations.push_back("partition has an empty boundary");
    if (p->interior().empty())
      r.violations.push_back("partition has an empty interior");
    for (int z : p->boundary()) {
      bool has_interior_neighbor = false;
      for (int y : p->interior())
        if (g.weight(z, y) > 0.0) {
          has_interior_neighbor = true;
          break;
        }
      if (!has_interior_neighbor)
        r.violations.push_back("boundary vertex " + g.id(z) + " has no interior neighbor");
    }
    if (!p->interior().empty() && !g.connected_on(p->interior()))
      r.violations.push_back("induced interior subgraph is not connected");
  }
  return r;
}

double laplacian_full(const WeightedGraph& g, std::span<const double> u, int x) {
  if (x < 0 || x >= g.size()) throw std::invalid_argument("laplacian_full: unknown vertex");
  double s = 0.0;
  for (int y = 0; y < g.size(); ++y) s += (u[y] - u[x]) * g.weight(y, x);
  return s / g.measure(x);
}

double laplacian_domain(const WeightedGraph& g, const DomainPartition& p,
                        std::span<const double> u, int x) {
  if (x < 0 || x >= g.size() || !p.is_interior(x))
    throw std::invalid_argument("laplacian_domain: vertex not interior");
  return laplacian_full(g, u, x);
}

double normal_derivative(const WeightedGraph& g, const DomainPartition& p,
                         std::span<const double> u, int z) {
  if (z < 0 || z >= g.size() || !p.is_boundary(z))
    throw std::invalid_argument("normal_derivative: vertex not boundary");
  double s = 0.0;
  for (int y : p.interior()) s += (u[z] - u[y]) * g.weight(z, y);
  return s / g.measure(z);
}

double gradient_form(const WeightedGraph& g, std::span<const double> u,
                     std::span<const double> v, int x) {
  if (x < 0 || x >= g.size()) throw std::invalid_argument("gradient_form: unknown vertex");
  double s = 0.0;
  for (int y = 0; y < g.size(); ++y)
    s += g.weight(x, y) * (u[y] - u[x]) * (v[y] - v[x]);
  return s / (2.0 * g.measure(x));
}

double gradient_norm(const WeightedGraph& g, std::span<const double> u, int x) {
  return std::sqrt(std::max(0.0, gradient_form(g, u, u, x)));
}

double drift_dot_gradient(const WeightedGraph& g, const DriftField& b,
                          std::span<const double> u, int x) {
  if (x < 0 || x >= g.size()) throw std::invalid_argument("drift_dot_gradient: unknown vertex");
  double s = 0.0;
  for (int y = 0; y < g.size(); ++y) {
    const double w = g.weight(x, y);
    if (w > 0.0) s += b[y] * (u[y] - u[x]) * std::sqrt(w / (2.0 * g.measure(x)));
  }
  return s;
}

double integrate(const WeightedGraph& g, std::span<const double> u) {
  double s = 0.0;
  for (int x = 0; x < g.size(); ++x) s += g.measure(x) * u[x];
  return s;
}

double integrate(const WeightedGraph& g, std::span<const double> u, std::span<const int> subset) {
  double s = 0.0;
  for (int x : subset) s += g.measure(x) * u[x];
  return s;
}

double sup_norm(std::span<const double> u) {
  double s = 0.0;
  for (double v : u) s = std::max(s, std::abs(v));
  return s;
}

double lp_norm(const WeightedGraph& g, std::span<const double> u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (u.empty()) throw std::invalid_argument("lp_norm: empty function");
  double s = 0.0;
  for (int x = 0; x < g.size(); ++x) s += g.measure(x) * std::pow(std::abs(u[x]), p);
  return std::pow(s, 1.0 / p);
}

double volume(const WeightedGraph& g, std::span<const int> subset) {
  double s = 0.0;
  for (int x : subset) s += g.measure(x);
  return s;
}

// ---- file format ----

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw ParseError(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

GraphFile parse_graph_text(const std::string& text, const std::string& origin) {
  std::vector<VertexId> ids;
  std::vector<double> mu;
  std::vector<std::string> roles;
  std::vector<WeightedGraph::Edge> edges;
  std::set<std::pair<int, int>> seen_edges;

  enum class Section { None, Vertices, Edges } section = Section::None;
  std::istringstream in(text);
  std::string raw_line;
  int lineno = 0;
  auto index_of = [&](const std::string& id) {
    for (size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return static_cast<int>(i);
    return -1;
  };

  while (std::getline(in, raw_line)) {
    ++lineno;
    std::string line = raw_line;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "vertices:") {
      section = Section::Vertices;
      continue;
    }
    if (line == "edges:") {
      section = Section::Edges;
      continue;
    }
    auto fields = split_fields(line);
    if (section == Section::Vertices) {
      if (fields.size() != 3) fail(origin, lineno, "vertex record needs `id, measure, role`");
      if (index_of(fields[0]) >= 0) fail(origin, lineno, "duplicate vertex id " + fields[0]);
      double m;
      try {
        m = std::stod(fields[1]);
      } catch (const std::exception&) {
        fail(origin, lineno, "bad measure `" + fields[1] + "`");
      }
      if (!(m > 0.0)) fail(origin, lineno, "measure must be positive");
      if (fields[2] != "interior" && fields[2] != "boundary" && fields[2] != "plain")
        fail(origin, lineno, "role must be interior, boundary or plain");
      ids.push_back(fields[0]);
      mu.push_back(m);
      roles.push_back(fields[2]);
    } else if (section == Section::Edges) {
      if (fields.size() != 3) fail(origin, lineno, "edge record needs `id1, id2, weight`");
      const int i = index_of(fields[0]);
      const int j = index_of(fields[1]);
      if (i < 0) fail(origin, lineno, "unknown vertex " + fields[0]);
      if (j < 0) fail(origin, lineno, "unknown vertex " + fields[1]);
      if (i == j) fail(origin, lineno, "self-loop on " + fields[0]);
      double w;
      try {
        w = std::stod(fields[2]);
      } catch (const std::exception&) {
        fail(origin, lineno, "bad weight `" + fields[2] + "`");
      }
      if (!(w > 0.0)) fail(origin, lineno, "edge weight must be positive");
      auto key = std::minmax(i, j);
      if (!seen_edges.insert({key.first, key.second}).second)
        fail(origin, lineno, "duplicate edge " + fields[0] + "--" + fields[1]);
      edges.push_back({i, j, w});
    } else {
      fail(origin, lineno, "record outside of a section");
    }
  }
  if (ids.empty()) fail(origin, lineno, "no vertices");

  const bool any_plain =
      std::any_of(roles.begin(), roles.end(), [](const std::string& r) { return r == "plain"; });
  const bool all_plain =
      std::all_of(roles.begin(), roles.end(), [](const std::string& r) { return r == "plain"; });
  if (any_plain && !all_plain)
    fail(origin, lineno, "roles mix `plain` with interior/boundary");

  WeightedGraph g(ids, mu, edges);
  GraphFile out{std::move(g), std::nullopt};
  if (!any_plain) {
    std::vector<DomainPartition::Role> rs;
    rs.reserve(roles.size());
    for (const auto& r : roles)
      rs.push_back(r == "interior" ? DomainPartition::Role::Interior
                                   : DomainPartition::Role::Boundary);
    out.partition.emplace(out.graph, rs);
  }
  return out;
}

GraphFile load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_graph_text(ss.str(), path);
}

WeightedGraph demo_graph() {
  std::vector<VertexId> ids{"x1", "x2", "x3", "x4", "x5"};
  std::vector<WeightedGraph::Edge> edges{{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0},
                                         {1, 2, 1.0}, {2, 4, 1.0}};
  std::vector<double> mu(5, 0.0);
  for (const auto& e : edges) {
    mu[e.i] += e.w;
    mu[e.j] += e.w;
  }
  return WeightedGraph(std::move(ids), std::move(mu), edges);
}

DomainPartition demo_partition(const WeightedGraph& g) {
  using Role = DomainPartition::Role;
  return DomainPartition(
      g, {Role::Interior, Role::Interior, Role::Interior, Role::Boundary, Role::Boundary});
}

GraphFunction demo_initial() { return {8.0, 1.0, 0.5, 0.0, 0.0}; }

}  // namespace graphpde
