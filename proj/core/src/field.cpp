#include "ctc/field.hpp"

#include <stdexcept>
#include <string>

namespace ctc::gf {

namespace {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

PrimeField::PrimeField(std::uint32_t modulus) : q_(modulus) {
  if (modulus < 2 || modulus > 65537) {
    throw std::invalid_argument("field modulus out of range [2, 65537]: " +
                                std::to_string(modulus));
  }
  if (!is_prime(modulus)) {
    throw std::invalid_argument("field modulus not prime: " + std::to_string(modulus));
  }
}

Element PrimeField::inv(Element a) const {
  if (a == 0) throw std::invalid_argument("inverse of zero");
  // extended Euclid on (q, a)
  std::int64_t r0 = q_, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t quot = r0 / r1;
    std::int64_t r2 = r0 - quot * r1;
    std::int64_t t2 = t0 - quot * t1;
    r0 = r1; r1 = r2;
    t0 = t1; t1 = t2;
  }
  if (t0 < 0) t0 += q_;
  return static_cast<Element>(t0);
}

Element PrimeField::pow(Element base, std::uint64_t exponent) const {
  Element result = 1 % q_;
  Element b = base % q_;
  while (exponent != 0) {
    if (exponent & 1) result = mul(result, b);
    b = mul(b, b);
    exponent >>= 1;
  }
  return result;
}

Matrix::Matrix(PrimeField field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

Matrix Matrix::identity(PrimeField field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

std::vector<Element> Matrix::column(std::size_t c) const {
  std::vector<Element> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::columns(std::span<const std::size_t> indices) const {
  Matrix out(field_, rows_, indices.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (indices[j] >= cols_) throw std::invalid_argument("column index out of range");
      out(r, j) = (*this)(r, indices[j]);
    }
  }
  return out;
}

Matrix Matrix::transposed() const {
  Matrix out(field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Matrix Matrix::with_appended_column(std::span<const Element> v) const {
  if (v.size() != rows_) throw std::invalid_argument("column height mismatch");
  Matrix out(field_, rows_, cols_ + 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c);
    out(r, cols_) = v[r];
  }
  return out;
}

void Matrix::append_row(std::span<const Element> r) {
  if (r.size() != cols_) throw std::invalid_argument("row width mismatch");
  a_.insert(a_.end(), r.begin(), r.end());
  ++rows_;
}

std::vector<Element> Matrix::mul_vec(std::span<const Element> x) const {
  if (x.size() != cols_) throw std::invalid_argument("vector length mismatch");
  const std::uint64_t q = field_.modulus();
  std::vector<Element> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      acc += std::uint64_t{(*this)(r, c)} * x[c];
      if (acc >= (std::uint64_t{1} << 62)) acc %= q;
    }
    out[r] = static_cast<Element>(acc % q);
  }
  return out;
}

Echelon reduced_row_echelon(const Matrix& m) {
  Echelon e{m, {}, std::vector<std::optional<std::size_t>>(m.cols()), 0};
  Matrix& a = e.rref;
  const PrimeField& f = m.field();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < a.cols() && pivot_row < a.rows(); ++col) {
    std::size_t sel = pivot_row;
    while (sel < a.rows() && a(sel, col) == 0) ++sel;
    if (sel == a.rows()) continue;
    if (sel != pivot_row) {
      for (std::size_t c = 0; c < a.cols(); ++c) std::swap(a(sel, c), a(pivot_row, c));
    }
    const Element scale = f.inv(a(pivot_row, col));
    for (std::size_t c = 0; c < a.cols(); ++c)
      a(pivot_row, c) = f.mul(a(pivot_row, c), scale);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == pivot_row || a(r, col) == 0) continue;
      const Element factor = a(r, col);
      for (std::size_t c = 0; c < a.cols(); ++c)
        a(r, c) = f.sub(a(r, c), f.mul(factor, a(pivot_row, c)));
    }
    e.pivot_cols.push_back(col);
    e.pivot_row_of_col[col] = pivot_row;
    ++pivot_row;
  }
  e.rank = e.pivot_cols.size();
  return e;
}

std::size_t rank(const Matrix& m) { return reduced_row_echelon(m).rank; }

bool in_span(std::span<const Element> v, const Matrix& m) {
  if (v.size() != m.rows()) throw std::invalid_argument("vector height mismatch");
  const std::size_t base = rank(m);
  return rank(m.with_appended_column(v)) == base;
}

std::optional<Element> unique_coordinate_solve(const Matrix& a,
                                               std::span<const Element> c,
                                               std::size_t i) {
  if (i >= a.cols()) throw std::invalid_argument("coordinate index out of range");
  const Echelon e = reduced_row_echelon(a.with_appended_column(c));
  const std::size_t aug = a.cols();
  if (e.pivot_row_of_col[aug].has_value()) {
    throw std::invalid_argument("inconsistent linear system");
  }
  if (!e.pivot_row_of_col[i].has_value()) return std::nullopt;  // free variable
  const std::size_t r = *e.pivot_row_of_col[i];
  // b[i] is pinned iff its pivot row involves no free variable.
  for (std::size_t col = 0; col < aug; ++col) {
    if (col == i || e.pivot_row_of_col[col].has_value()) continue;
    if (e.rref(r, col) != 0) return std::nullopt;
  }
  return e.rref(r, aug);
}

Matrix mds_generator(std::size_t n_out, std::size_t k_in, const PrimeField& field) {
  if (k_in == 0 || k_in > n_out) {
    throw std::invalid_argument("mds_generator needs 1 <= k_in <= n_out");
  }
  if (field.modulus() <= n_out) {
    throw std::invalid_argument("field too small for MDS: need q > " +
                                std::to_string(n_out));
  }
  // row r, column j = j^r over distinct points 0..n_out-1; any k_in columns
  // form a square Vandermonde with distinct nodes, hence nonsingular.
  Matrix g(field, k_in, n_out);
  for (std::size_t j = 0; j < n_out; ++j) {
    Element p = 1;
    for (std::size_t r = 0; r < k_in; ++r) {
      g(r, j) = p;
      p = field.mul(p, static_cast<Element>(j));
    }
  }
  return g;
}

}  // namespace ctc::gf
