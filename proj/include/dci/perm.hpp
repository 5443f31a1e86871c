#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dci {

using Point = std::uint32_t;

// A permutation of {0, ..., n-1}.
//
// Actions are written on the RIGHT, as in the group-theory literature this
// code follows: the image of y under f is f[y], and the product f * g means
// "apply f first, then g".  Consequently
//
//   (y)(f * g) = g[f[y]]
//   f.conjugate(b) == b.inverse() * f * b          (f^b in exponent notation)
//
// Every conjugation formula in the library uses this convention.
class Permutation {
 public:
  Permutation() = default;

  // Throws std::invalid_argument unless `images` is a bijection on 0..n-1.
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree);

  // Builds a permutation from disjoint cycles, e.g. {{0, 1, 2}, {3, 4}}.
  static Permutation from_cycles(
      std::size_t degree,
      std::initializer_list<std::initializer_list<Point>> cycles);
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>>& cycles);

  std::size_t degree() const { return images_.size(); }
  Point operator[](Point y) const { return images_[y]; }
  std::span<const Point> images() const { return images_; }

  bool is_identity() const;
  bool fixes(Point y) const { return images_[y] == y; }

  // Apply *this, then g.
  Permutation operator*(const Permutation& g) const;
  Permutation inverse() const;
  // e may be negative.
  Permutation pow(long long e) const;
  // b^-1 * this * b.
  Permutation conjugate(const Permutation& b) const;

  // Least common multiple of the cycle lengths.
  std::uint64_t order() const;
  std::vector<std::vector<Point>> cycles() const;
  std::vector<Point> moved_points() const;

  // Restriction to a subset that the permutation maps onto itself.
  // `points` lists the subset; point points[i] becomes i in the result.
  Permutation restrict_to(std::span<const Point> points) const;

  // Space-separated image list, e.g. "1 2 0".
  std::string to_string() const;
  static Permutation parse(std::string_view line);

  auto operator<=>(const Permutation&) const = default;
  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Point> images_;
};

// Free-function spellings of the core operations.
Permutation compose(const Permutation& f, const Permutation& g);
Permutation inverse(const Permutation& f);

// Extends a permutation of 0..k-1 to degree n >= k by fixing the rest.
Permutation extend(const Permutation& f, std::size_t degree);

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept;
};

}  // namespace dci
