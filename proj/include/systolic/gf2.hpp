#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace systolic {

/// Dense bit vector over Z/2.
class Gf2Vector {
public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  Gf2Vector &operator^=(const Gf2Vector &o);
  friend Gf2Vector operator^(Gf2Vector a, const Gf2Vector &b) { return a ^= b; }
  bool operator==(const Gf2Vector &o) const { return n_ == o.n_ && words_ == o.words_; }

  bool any() const;
  std::size_t count() const;
  /// Index of the lowest set bit, or size() if none.
  std::size_t lowest() const;
  /// Parity of the bitwise AND.
  bool dot(const Gf2Vector &o) const;

  std::vector<std::size_t> support() const;

private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Incrementally built set of independent vectors in echelon form.
class Gf2Echelon {
public:
  explicit Gf2Echelon(std::size_t dim) : dim_(dim) {}

  /// Reduces `v` against the stored rows; returns the remainder.
  Gf2Vector reduce(Gf2Vector v) const;
  /// Inserts `v` if independent; returns whether it was.
  bool insert(const Gf2Vector &v);

  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }

private:
  std::size_t dim_;
  std::vector<Gf2Vector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Basis of {x : <row, x> = 0 for every row}.
std::vector<Gf2Vector> gf2_nullspace(const std::vector<Gf2Vector> &rows, std::size_t ncols);

std::size_t gf2_rank(const std::vector<Gf2Vector> &rows);

/// Solves sum_i x_i rows[i] = target; nullopt when target is not in the span.
std::optional<Gf2Vector> gf2_solve_combination(const std::vector<Gf2Vector> &rows, const Gf2Vector &target);

/// Inverse of a square matrix given by rows; nullopt if singular.
std::optional<std::vector<Gf2Vector>> gf2_inverse(const std::vector<Gf2Vector> &rows);

} // namespace systolic
