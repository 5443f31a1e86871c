#include "dci/perm.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dci {

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (Point y : images_) {
    if (y >= images_.size() || seen[y])
      throw std::invalid_argument("permutation images are not a bijection");
    seen[y] = true;
  }
}

Permutation Permutation::identity(std::size_t degree) {
  std::vector<Point> im(degree);
  std::iota(im.begin(), im.end(), Point{0});
  Permutation p;
  p.images_ = std::move(im);
  return p;
}

Permutation Permutation::from_cycles(
    std::size_t degree,
    std::initializer_list<std::initializer_list<Point>> cycles) {
  std::vector<std::vector<Point>> cs;
  for (const auto& c : cycles) cs.emplace_back(c);
  return from_cycles(degree, cs);
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> im(degree);
  std::iota(im.begin(), im.end(), Point{0});
  std::vector<bool> used(degree, false);
  for (const auto& c : cycles) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] >= degree || used[c[i]])
        throw std::invalid_argument("cycles are not disjoint or out of range");
      used[c[i]] = true;
      im[c[i]] = c[(i + 1) % c.size()];
    }
  }
  return Permutation(std::move(im));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::operator*(const Permutation& g) const {
  if (g.degree() != degree())
    throw std::invalid_argument("permutation degree mismatch");
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) r.images_[i] = g.images_[images_[i]];
  return r;
}

Permutation Permutation::inverse() const {
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) r.images_[images_[i]] = static_cast<Point>(i);
  return r;
}

Permutation Permutation::pow(long long e) const {
  const auto ord = static_cast<long long>(order());
  e %= ord;
  if (e < 0) e += ord;
  Permutation r = identity(degree());
  Permutation base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Permutation Permutation::conjugate(const Permutation& b) const {
  if (b.degree() != degree())
    throw std::invalid_argument("permutation degree mismatch");
  // y -> b^-1 -> this -> b, i.e. images[b[y]] = b[this[y]].
  Permutation r;
  r.images_.resize(images_.size());
  for (std::size_t y = 0; y < images_.size(); ++y) r.images_[b.images_[y]] = b.images_[images_[y]];
  return r;
}

std::uint64_t Permutation::order() const {
  std::uint64_t l = 1;
  for (const auto& c : cycles()) l = std::lcm(l, static_cast<std::uint64_t>(c.size()));
  return l;
}

std::vector<std::vector<Point>> Permutation::cycles() const {
  std::vector<std::vector<Point>> out;
  std::vector<bool> seen(images_.size(), false);
  for (Point s = 0; s < images_.size(); ++s) {
    if (seen[s]) continue;
    std::vector<Point> c;
    for (Point y = s; !seen[y]; y = images_[y]) {
      seen[y] = true;
      c.push_back(y);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Point> Permutation::moved_points() const {
  std::vector<Point> out;
  for (Point y = 0; y < images_.size(); ++y)
    if (images_[y] != y) out.push_back(y);
  return out;
}

Permutation Permutation::restrict_to(std::span<const Point> points) const {
  std::vector<std::int64_t> index(images_.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) index[points[i]] = static_cast<std::int64_t>(i);
  std::vector<Point> im(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto j = index[images_[points[i]]];
    if (j < 0) throw std::invalid_argument("subset is not invariant under the permutation");
    im[i] = static_cast<Point>(j);
  }
  return Permutation(std::move(im));
}

std::string Permutation::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) os << ' ';
    os << images_[i];
  }
  return os.str();
}

Permutation Permutation::parse(std::string_view line) {
  std::istringstream is{std::string(line)};
  std::vector<Point> im;
  long long v;
  while (is >> v) {
    if (v < 0) throw std::invalid_argument("negative point in permutation text");
    im.push_back(static_cast<Point>(v));
  }
  if (!is.eof()) throw std::invalid_argument("malformed permutation text");
  return Permutation(std::move(im));
}

Permutation compose(const Permutation& f, const Permutation& g) { return f * g; }
Permutation inverse(const Permutation& f) { return f.inverse(); }

Permutation extend(const Permutation& f, std::size_t degree) {
  if (degree < f.degree()) throw std::invalid_argument("cannot extend to a smaller degree");
  std::vector<Point> im(degree);
  for (Point y = 0; y < degree; ++y) im[y] = y < f.degree() ? f[y] : y;
  return Permutation(std::move(im));
}

std::size_t PermutationHash::operator()(const Permutation& p) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (Point y : p.images()) {
    h ^= y;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace dci
