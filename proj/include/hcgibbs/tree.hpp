#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hcgibbs {

using Vertex = std::uint32_t;
using State = std::uint8_t;  // 0 vacant, 1 and 2 occupied

inline constexpr std::size_t kDefaultVertexCap = std::size_t{1} << 22;
inline constexpr std::size_t kDefaultEnumerationCap = 16;

/// A size or enumeration limit was hit.
class ResourceCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ball V_n of the Cayley tree of order k around the root x0, numbered
/// breadth-first. The root has k+1 children, every other vertex k.
/// Children of a vertex are contiguous, so V_m is the index prefix
/// [0, ball_size(m)).
class TreeLayout {
 public:
  static TreeLayout build(int k, int n, std::size_t vertex_cap = kDefaultVertexCap);

  int order() const { return k_; }
  int depth() const { return n_; }
  std::size_t size() const { return level_.size(); }
  static constexpr Vertex root() { return 0; }

  int level(Vertex x) const { return level_.at(x); }
  std::optional<Vertex> parent(Vertex x) const;
  std::span<const Vertex> children(Vertex x) const;

  /// W_m.
  std::span<const Vertex> sphere(int m) const;
  /// |W_m| and |V_m|; m may not exceed depth().
  std::size_t sphere_size(int m) const;
  std::size_t ball_size(int m) const;

 private:
  TreeLayout() = default;

  int k_ = 1;
  int n_ = 0;
  std::vector<int> level_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> vertices_;       // identity table, backs the spans
  std::vector<std::size_t> first_child_;
  std::vector<std::size_t> child_count_;
  std::vector<std::size_t> level_start_;  // size n+2
};

/// Closed-form |W_m| = (k+1) k^(m-1) for m >= 1, |W_0| = 1.
std::size_t sphere_size_formula(int k, int m);

/// Map V_n -> {0,1,2}. Holds a non-owning reference to its layout.
class Configuration {
 public:
  Configuration(const TreeLayout& layout, std::vector<State> states);
  static Configuration parse(const TreeLayout& layout, const std::string& digits);

  const TreeLayout& layout() const { return *layout_; }
  std::span<const State> states() const { return states_; }
  State operator[](Vertex x) const { return states_.at(x); }
  std::string str() const;

  /// Restriction to V_m (the first ball_size(m) vertices).
  std::span<const State> prefix(int m) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.layout_ == b.layout_ && a.states_ == b.states_;
  }

 private:
  const TreeLayout* layout_;
  std::vector<State> states_;
};

/// Neighbouring states may not sum to 0 or 3.
constexpr bool allowed_pair(State a, State b) {
  const int s = a + b;
  return s != 0 && s != 3;
}

bool is_admissible(const Configuration& c);

/// Whether the root counts toward V_n.
enum class RootConvention { Inclusive, Exclusive };

/// #sigma: vertices with state >= 1.
std::size_t occupied_count(const Configuration& c,
                           RootConvention convention = RootConvention::Inclusive);

using PartialAssignment = std::vector<std::optional<State>>;

/// Depth-first over vertex index, states tried 0, 1, 2; yields admissible
/// configurations agreeing with `fixed`. The visitor returns false to stop.
void for_each_admissible(const TreeLayout& layout, const PartialAssignment& fixed,
                         const std::function<bool(const Configuration&)>& visit,
                         std::size_t cap = kDefaultEnumerationCap);

std::vector<Configuration> enumerate_admissible(
    const TreeLayout& layout, const PartialAssignment& fixed = {},
    std::size_t cap = kDefaultEnumerationCap);

}  // namespace hcgibbs
