#include "hcgibbs/tree.hpp"

#include <numeric>

namespace hcgibbs {

std::size_t sphere_size_formula(int k, int m) {
  if (m == 0) return 1;
  std::size_t s = static_cast<std::size_t>(k) + 1;
  for (int i = 1; i < m; ++i) s *= static_cast<std::size_t>(k);
  return s;
}

TreeLayout TreeLayout::build(int k, int n, std::size_t vertex_cap) {
  if (k < 1) throw std::invalid_argument("tree order k must be >= 1");
  if (n < 0) throw std::invalid_argument("tree depth n must be >= 0");

  std::size_t total = 1;
  std::size_t width = 1;
  for (int m = 1; m <= n; ++m) {
    const std::size_t branching = m == 1 ? static_cast<std::size_t>(k) + 1
                                         : static_cast<std::size_t>(k);
    if (width > vertex_cap / branching) {
      throw ResourceCapExceeded("tree V_" + std::to_string(n) + " exceeds vertex cap");
    }
    width *= branching;
    total += width;
    if (total > vertex_cap) {
      throw ResourceCapExceeded("tree V_" + std::to_string(n) + " exceeds vertex cap");
    }
  }

  TreeLayout t;
  t.k_ = k;
  t.n_ = n;
  t.level_.reserve(total);
  t.parent_.reserve(total);
  t.level_.push_back(0);
  t.parent_.push_back(0);
  t.level_start_.push_back(0);
  t.level_start_.push_back(1);
  for (int m = 1; m <= n; ++m) {
    for (std::size_t x = t.level_start_[m - 1]; x < t.level_start_[m]; ++x) {
      const int branching = m == 1 ? k + 1 : k;
      for (int c = 0; c < branching; ++c) {
        t.level_.push_back(m);
        t.parent_.push_back(static_cast<Vertex>(x));
      }
    }
    t.level_start_.push_back(t.level_.size());
  }

  t.vertices_.resize(total);
  std::iota(t.vertices_.begin(), t.vertices_.end(), Vertex{0});
  t.first_child_.assign(total, total);
  t.child_count_.assign(total, 0);
  for (std::size_t x = 1; x < total; ++x) {
    const Vertex p = t.parent_[x];
    if (t.child_count_[p] == 0) t.first_child_[p] = x;
    ++t.child_count_[p];
  }
  return t;
}

std::optional<Vertex> TreeLayout::parent(Vertex x) const {
  if (x >= size()) throw std::out_of_range("vertex out of range");
  if (x == root()) return std::nullopt;
  return parent_[x];
}

std::span<const Vertex> TreeLayout::children(Vertex x) const {
  if (x >= size()) throw std::out_of_range("vertex out of range");
  if (child_count_[x] == 0) return {};
  return std::span<const Vertex>(vertices_).subspan(first_child_[x], child_count_[x]);
}

std::span<const Vertex> TreeLayout::sphere(int m) const {
  if (m < 0 || m > n_) throw std::out_of_range("sphere index out of range");
  return std::span<const Vertex>(vertices_).subspan(level_start_[m],
                                                    level_start_[m + 1] - level_start_[m]);
}

std::size_t TreeLayout::sphere_size(int m) const { return sphere(m).size(); }

std::size_t TreeLayout::ball_size(int m) const {
  if (m < 0) return 0;
  if (m > n_) throw std::out_of_range("ball index out of range");
  return level_start_[m + 1];
}

// --------------------------------------------------------------------------

Configuration::Configuration(const TreeLayout& layout, std::vector<State> states)
    : layout_(&layout), states_(std::move(states)) {
  if (states_.size() != layout.size()) {
    throw std::invalid_argument("configuration size does not match layout");
  }
  for (State s : states_) {
    if (s > 2) throw std::invalid_argument("state must be 0, 1 or 2");
  }
}

Configuration Configuration::parse(const TreeLayout& layout, const std::string& digits) {
  std::vector<State> states;
  states.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '2') throw std::invalid_argument("configuration digit must be 0, 1 or 2");
    states.push_back(static_cast<State>(c - '0'));
  }
  return Configuration(layout, std::move(states));
}

std::string Configuration::str() const {
  std::string s;
  s.reserve(states_.size());
  for (State v : states_) s.push_back(static_cast<char>('0' + v));
  return s;
}

std::span<const State> Configuration::prefix(int m) const {
  return std::span<const State>(states_).first(layout_->ball_size(m));
}

bool is_admissible(const Configuration& c) {
  const TreeLayout& t = c.layout();
  for (Vertex x = 1; x < t.size(); ++x) {
    if (!allowed_pair(c[x], c[*t.parent(x)])) return false;
  }
  return true;
}

std::size_t occupied_count(const Configuration& c, RootConvention convention) {
  std::size_t count = 0;
  const auto s = c.states();
  const std::size_t start = convention == RootConvention::Inclusive ? 0 : 1;
  for (std::size_t x = start; x < s.size(); ++x) count += s[x] >= 1 ? 1 : 0;
  return count;
}

void for_each_admissible(const TreeLayout& layout, const PartialAssignment& fixed,
                         const std::function<bool(const Configuration&)>& visit,
                         std::size_t cap) {
  if (layout.size() > cap) {
    throw ResourceCapExceeded("enumeration over |V| = " + std::to_string(layout.size()) +
                              " vertices exceeds cap " + std::to_string(cap));
  }
  if (fixed.size() > layout.size()) {
    throw std::invalid_argument("partial assignment longer than the layout");
  }
  const std::size_t n = layout.size();
  std::vector<State> states(n, 0);
  // Explicit DFS stack: next state to try per vertex index.
  std::vector<int> next(n + 1, 0);
  std::size_t depth = 0;
  auto candidate_ok = [&](std::size_t x, State s) {
    if (x < fixed.size() && fixed[x] && *fixed[x] != s) return false;
    if (x == 0) return true;
    return allowed_pair(s, states[*layout.parent(static_cast<Vertex>(x))]);
  };
  while (true) {
    if (depth == n) {
      if (!visit(Configuration(layout, states))) return;
      if (depth == 0) return;
      --depth;
      continue;
    }
    bool advanced = false;
    while (next[depth] < 3) {
      const State s = static_cast<State>(next[depth]++);
      if (candidate_ok(depth, s)) {
        states[depth] = s;
        ++depth;
        next[depth] = 0;
        advanced = true;
        break;
      }
    }
    if (advanced) continue;
    if (depth == 0) return;
    --depth;
  }
}

std::vector<Configuration> enumerate_admissible(const TreeLayout& layout,
                                                const PartialAssignment& fixed,
                                                std::size_t cap) {
  std::vector<Configuration> out;
  for_each_admissible(
      layout, fixed,
      [&](const Configuration& c) {
        out.push_back(c);
        return true;
      },
      cap);
  return out;
}

}  // namespace hcgibbs
