#include "systolic/gf2.hpp"

#include <bit>
#include <stdexcept>

namespace systolic {

Gf2Vector &Gf2Vector::operator^=(const Gf2Vector &o) {
  if (o.n_ != n_) throw std::invalid_argument("Gf2Vector size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
  return *this;
}

bool Gf2Vector::any() const {
  for (auto w : words_)
    if (w) return true;
  return false;
}

std::size_t Gf2Vector::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::size_t Gf2Vector::lowest() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
  return n_;
}

bool Gf2Vector::dot(const Gf2Vector &o) const {
  if (o.n_ != n_) throw std::invalid_argument("Gf2Vector size mismatch");
  std::uint64_t acc = 0;
  for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & o.words_[w];
  return std::popcount(acc) & 1;
}

std::vector<std::size_t> Gf2Vector::support() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t x = words_[w];
    while (x) {
      out.push_back(w * 64 + static_cast<std::size_t>(std::countr_zero(x)));
      x &= x - 1;
    }
  }
  return out;
}

Gf2Vector Gf2Echelon::reduce(Gf2Vector v) const {
  for (std::size_t r = 0; r < rows_.size(); ++r)
    if (v.get(pivots_[r])) v ^= rows_[r];
  return v;
}

bool Gf2Echelon::insert(const Gf2Vector &v) {
  Gf2Vector rem = reduce(v);
  if (!rem.any()) return false;
  const std::size_t p = rem.lowest();
  // Keep rows fully reduced at their pivots so reduce() is order independent.
  for (auto &row : rows_)
    if (row.get(p)) row ^= rem;
  rows_.push_back(std::move(rem));
  pivots_.push_back(p);
  return true;
}

std::vector<Gf2Vector> gf2_nullspace(const std::vector<Gf2Vector> &rows, std::size_t ncols) {
  // Reduced row echelon form.
  std::vector<Gf2Vector> m = rows;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && !m[p].get(c)) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i].get(c)) m[i] ^= m[r];
    pivot_col.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : pivot_col) is_pivot[c] = true;
  std::vector<Gf2Vector> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Gf2Vector x(ncols);
    x.set(f);
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      if (m[i].get(f)) x.set(pivot_col[i]);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::size_t gf2_rank(const std::vector<Gf2Vector> &rows) {
  if (rows.empty()) return 0;
  Gf2Echelon e(rows.front().size());
  for (const auto &r : rows) e.insert(r);
  return e.rank();
}

std::optional<Gf2Vector> gf2_solve_combination(const std::vector<Gf2Vector> &rows, const Gf2Vector &target) {
  const std::size_t k = rows.size();
  const std::size_t n = target.size();
  // Augmented vectors [row | e_i] reduced on the first n coordinates.
  std::vector<Gf2Vector> aug;
  aug.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Gf2Vector a(n + k);
    for (auto j : rows[i].support()) a.set(j);
    a.set(n + i);
    aug.push_back(std::move(a));
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < aug.size(); ++c) {
    std::size_t p = r;
    while (p < aug.size() && !aug[p].get(c)) ++p;
    if (p == aug.size()) continue;
    std::swap(aug[p], aug[r]);
    for (std::size_t i = 0; i < aug.size(); ++i)
      if (i != r && aug[i].get(c)) aug[i] ^= aug[r];
    pivots.push_back(c);
    ++r;
  }
  Gf2Vector t(n + k);
  for (auto j : target.support()) t.set(j);
  for (std::size_t i = 0; i < pivots.size(); ++i)
    if (t.get(pivots[i])) t ^= aug[i];
  for (std::size_t j = 0; j < n; ++j)
    if (t.get(j)) return std::nullopt;
  Gf2Vector x(k);
  for (std::size_t i = 0; i < k; ++i)
    if (t.get(n + i)) x.set(i);
  return x;
}

} // namespace systolic

namespace systolic {

std::optional<std::vector<Gf2Vector>> gf2_inverse(const std::vector<Gf2Vector> &rows) {
  const std::size_t d = rows.size();
  std::vector<Gf2Vector> a(d, Gf2Vector(2 * d));
  for (std::size_t i = 0; i < d; ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("gf2_inverse: matrix is not square");
    for (std::size_t j : rows[i].support()) a[i].set(j);
    a[i].set(d + i);
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && !a[p].get(c)) ++p;
    if (p == d) return std::nullopt;
    std::swap(a[p], a[c]);
    for (std::size_t r = 0; r < d; ++r)
      if (r != c && a[r].get(c)) a[r] ^= a[c];
  }
  std::vector<Gf2Vector> inv(d, Gf2Vector(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) inv[i].set(j, a[i].get(d + j));
  return inv;
}

} // namespace systolic
