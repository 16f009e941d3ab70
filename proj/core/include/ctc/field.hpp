#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ctc::gf {

using Element = std::uint32_t;

/// Arithmetic over a prime field F_q, 2 <= q <= 2^16 + 1.
/// Element values are kept reduced into [0, q).
class PrimeField {
 public:
  /// Throws std::invalid_argument if the modulus is out of range or not prime.
  explicit PrimeField(std::uint32_t modulus);

  std::uint32_t modulus() const { return q_; }

  Element add(Element a, Element b) const { return wrap(a + b); }
  Element sub(Element a, Element b) const { return wrap(a + q_ - b); }
  Element neg(Element a) const { return a == 0 ? 0u : q_ - a; }
  Element mul(Element a, Element b) const {
    return static_cast<Element>(std::uint64_t{a} * b % q_);
  }
  /// Multiplicative inverse; throws std::invalid_argument for a == 0.
  Element inv(Element a) const;
  Element pow(Element base, std::uint64_t exponent) const;

  bool operator==(const PrimeField&) const = default;

 private:
  Element wrap(std::uint32_t s) const { return s >= q_ ? s - q_ : s; }
  std::uint32_t q_;
};

/// Dense row-major matrix over a prime field.
class Matrix {
 public:
  Matrix(PrimeField field, std::size_t rows, std::size_t cols);
  static Matrix identity(PrimeField field, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const PrimeField& field() const { return field_; }

  Element operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  Element& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }

  std::span<const Element> row(std::size_t r) const {
    return {a_.data() + r * cols_, cols_};
  }
  std::vector<Element> column(std::size_t c) const;

  /// Submatrix keeping the given columns, in the given order.
  Matrix columns(std::span<const std::size_t> indices) const;
  Matrix transposed() const;
  /// [this | v] with v as an extra rightmost column.
  Matrix with_appended_column(std::span<const Element> v) const;
  void append_row(std::span<const Element> r);

  std::vector<Element> mul_vec(std::span<const Element> x) const;

  bool operator==(const Matrix&) const = default;

 private:
  PrimeField field_;
  std::size_t rows_, cols_;
  std::vector<Element> a_;
};

/// Reduced row echelon form. Pivoting is deterministic: columns are
/// processed left to right and the first row with a nonzero entry is used.
struct Echelon {
  Matrix rref;
  std::vector<std::size_t> pivot_cols;             // one per pivot row, ascending
  std::vector<std::optional<std::size_t>> pivot_row_of_col;
  std::size_t rank = 0;
};

Echelon reduced_row_echelon(const Matrix& m);

std::size_t rank(const Matrix& m);

/// True iff v lies in the column space of m (v.size() must equal m.rows()).
bool in_span(std::span<const Element> v, const Matrix& m);

/// For a consistent system A*b = c, returns b[i] if it is the same across
/// every solution, std::nullopt otherwise. Throws std::invalid_argument if
/// the system is inconsistent or i is out of range.
std::optional<Element> unique_coordinate_solve(const Matrix& a,
                                               std::span<const Element> c,
                                               std::size_t i);

/// k_in x n_out generator whose every k_in x k_in column submatrix is
/// nonsingular (Vandermonde on the distinct points 0..n_out-1). Requires
/// field.modulus() > n_out.
Matrix mds_generator(std::size_t n_out, std::size_t k_in, const PrimeField& field);

}  // namespace ctc::gf
