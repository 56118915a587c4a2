#pragma once

#include <memory>
#include <unordered_map>
#include <vector>

#include "xprod/linalg.hpp"

namespace xprod {

/// A finite group given by its multiplication table. Elements are indices
/// into `labels`; the table is validated to be a Latin square with identity,
/// inverses, and full associativity.
class FiniteGroup {
 public:
  static std::shared_ptr<const FiniteGroup> cyclic(int n);
  static std::shared_ptr<const FiniteGroup> dihedral(int n);
  /// Symmetric group on n <= 4 points; labels are one-line notation ("102").
  static std::shared_ptr<const FiniteGroup> symmetric(int n);
  static std::shared_ptr<const FiniteGroup> from_table(
      std::vector<std::string> labels, std::vector<std::vector<int>> table);

  int order() const { return static_cast<int>(labels_.size()); }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return table_[check(a)][check(b)]; }
  int inv(int a) const { return inverse_[check(a)]; }
  const std::string& label(int a) const { return labels_[check(a)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Index of a label, or throws InvalidElement.
  int index_of(const std::string& label) const;

 private:
  FiniteGroup(std::vector<std::string> labels, std::vector<std::vector<int>> table);
  void validate() const;
  int check(int a) const {
    if (a < 0 || a >= order()) throw InvalidElement("group element index out of range");
    return a;
  }

  std::vector<std::string> labels_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  int identity_ = -1;
};

/// An element of the tuple monoid: a nonempty word (t_1, ..., t_l) of group
/// element indices.
struct GroupTuple {
  std::vector<int> parts;

  explicit GroupTuple(std::vector<int> p) : parts(std::move(p)) {
    if (parts.empty()) throw InvalidElement("GroupTuple: empty tuple");
  }
  static GroupTuple singleton(int s) { return GroupTuple({s}); }

  bool operator==(const GroupTuple& o) const { return parts == o.parts; }
  std::size_t length() const { return parts.size(); }
};

/// Product of the components, left to right: (t_1,...,t_l) -> t_1 ... t_l.
int tuple_product(const FiniteGroup& g, const GroupTuple& t);
/// Componentwise inversion in reverse order: (t_l^-1, ..., t_1^-1).
GroupTuple tuple_inverse(const FiniteGroup& g, const GroupTuple& t);
/// Left translation touches only the first slot: r(t_1,...,t_l) = (r t_1, t_2, ...).
GroupTuple left_translate(const FiniteGroup& g, int r, const GroupTuple& t);

/// An ordered finite set of distinct tuples; the basis order of the attached
/// l^2 space is construction order and never changes.
class Window {
 public:
  Window() = default;
  explicit Window(const FiniteGroup& g, std::vector<GroupTuple> tuples);

  /// All singletons (s) for s in G, in element order.
  static Window group_singletons(const FiniteGroup& g);
  /// Singletons over the given element indices, in the given order.
  static Window singletons(const FiniteGroup& g, const std::vector<int>& elements);

  int size() const { return static_cast<int>(tuples_.size()); }
  const GroupTuple& tuple(int i) const { return tuples_[i]; }
  const std::vector<GroupTuple>& tuples() const { return tuples_; }
  /// Index of a tuple in this window, or -1.
  int find(const GroupTuple& t) const;
  bool contains(const GroupTuple& t) const { return find(t) >= 0; }

  bool closed_under(const FiniteGroup& g, int r) const;
  /// The pointwise translate rW, order preserved.
  Window translated(const FiniteGroup& g, int r) const;
  /// Union of rW over all r in G; contains W and is closed under every
  /// translation.
  Window translation_closure(const FiniteGroup& g) const;

 private:
  std::vector<GroupTuple> tuples_;
  std::unordered_map<std::string, int> index_;
  static std::string key(const GroupTuple& t);
};

/// |G| x |G| permutation matrix of left translation on l^2(G):
/// delta_u -> delta_{su}.
Matrix regular_unitary(const FiniteGroup& g, int s);

/// |W| x |W| permutation matrix delta_t -> delta_{rt} on l^2(W). Throws
/// WindowNotClosed when some rt leaves the window.
Matrix translation_unitary(const FiniteGroup& g, int r, const Window& w);

}  // namespace xprod
