#pragma once

#include <cstdint>
#include <vector>

#include "sinv/rational.hpp"

namespace sinv {

/// Dense matrix over the field R(s), row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols)
        : rows_(rows), cols_(cols),
          e_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}
    static RationalMatrix column(const std::vector<RationalFunction>& entries);
    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    RationalFunction& at(int r, int c) { return e_[idx(r, c)]; }
    const RationalFunction& at(int r, int c) const { return e_[idx(r, c)]; }

    RationalMatrix operator*(const RationalMatrix& o) const;
    RationalMatrix transpose() const;
    RationalMatrix augment(const RationalMatrix& o) const;  // [this | o]

private:
    std::size_t idx(int r, int c) const {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
               static_cast<std::size_t>(c);
    }
    int rows_ = 0, cols_ = 0;
    std::vector<RationalFunction> e_;
};

/// Rank over R(s). Gaussian elimination; zero tests evaluate candidates at 5
/// random points in s in [0.3,3] union j[0.3,3] drawn from the seeded
/// generator and require all below tolerance.
int rank_rs(const RationalMatrix& m, std::uint64_t seed = 0x5eed);

/// True iff rank([P | y]) == rank(P).
bool image_membership(const RationalMatrix& p, const RationalMatrix& y,
                      std::uint64_t seed = 0x5eed);

/// Rouche-Capelli solve of P*U = y for a single-column y. Throws NotInImage
/// when inconsistent and Underdetermined (with the free-variable count) when
/// rank < cols.
RationalMatrix solve_exact(const RationalMatrix& p, const RationalMatrix& y,
                           std::uint64_t seed = 0x5eed);

enum class LeftInverseKind { Averaged, GramBased };

const char* to_string(LeftInverseKind kind);
LeftInverseKind left_inverse_kind_from_string(const std::string& name);

/// Left inverse with P+ * P = I. Averaged (n x 1 columns only): entry i is
/// (1/n)*(1/P_i) — matches the printed controllers this library reproduces.
/// GramBased: (P^T P)^-1 P^T with plain transpose over R(s).
RationalMatrix left_inverse(const RationalMatrix& p, LeftInverseKind kind,
                            std::uint64_t seed = 0x5eed);

}  // namespace sinv
