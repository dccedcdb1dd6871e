// Sphere groups <g1,...,gn | g1*...*gn> and their conjugacy classes.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphmach/word.hpp"

namespace sphmach {

class SphereGroup {
 public:
  // The trivial group, n = 0.
  SphereGroup() = default;
  // names are given in relator order. orders: empty means all infinite.
  explicit SphereGroup(std::vector<std::string> names,
                       std::vector<std::optional<long>> orders = {});

  int size() const noexcept { return static_cast<int>(names_.size()); }
  // rank of the underlying free group
  int rank() const noexcept { return size() == 0 ? 0 : size() - 1; }
  std::vector<std::string> const& names() const noexcept { return names_; }
  std::string const& name(int i) const { return names_.at(i - 1); }
  std::optional<int> index_of(std::string_view name) const;
  std::vector<std::optional<long>> const& orders() const noexcept {
    return orders_;
  }

  Word generator(int i) const;
  Word relator() const;

  // Eliminates the last generator: gn = (g1*...*g(n-1))^-1.
  Word normal_form(Word const& w) const;
  bool equal(Word const& u, Word const& v) const {
    return normal_form(u) == normal_form(v);
  }
  // throws std::out_of_range when a letter does not index a generator
  void check_word(Word const& w) const;

  // names joined by '*', inverses as x^-1, identity as "1"
  std::string format(Word const& w) const;
  // format of a normal form with runs (g1*...*g(n-1))^-1 written back as gn
  std::string pretty(Word const& w) const;

  bool operator==(SphereGroup const& other) const {
    return names_ == other.names_ && orders_ == other.orders_;
  }

 private:
  void require_orientable() const;

  std::vector<std::string> names_;
  std::vector<std::optional<long>> orders_;
};

// Conjugacy class of a sphere group element, optionally up to inversion.
// The representative is the shortlex least rotation of the cyclically
// reduced normal form (and of its inverse when sign-insensitive).
class ConjClass {
 public:
  ConjClass() = default;  // trivial class
  static ConjClass of(SphereGroup const& G, Word const& w,
                      bool sign_insensitive = false);

  Word const& representative() const noexcept { return rep_; }
  bool sign_insensitive() const noexcept { return unsigned_; }
  bool trivial() const noexcept { return rep_.empty(); }
  ConjClass inverse() const;
  // the class up to inversion
  ConjClass unsigned_class() const;

  std::strong_ordering operator<=>(ConjClass const& other) const = default;
  bool operator==(ConjClass const& other) const = default;

 private:
  Word rep_;
  bool unsigned_ = false;
};

std::optional<ConjugatorCoset> is_conjugate(Word const& u, Word const& v,
                                            SphereGroup const& G);

// w with us[i]^w = vs[i] for all i, if one exists.
std::optional<Word> simultaneous_conjugator(std::vector<Word> const& us,
                                            std::vector<Word> const& vs,
                                            SphereGroup const& G);

// index of the peripheral class equal to c (sign-sensitive), if any
std::optional<int> peripheral_index(SphereGroup const& G, ConjClass const& c);

}  // namespace sphmach
