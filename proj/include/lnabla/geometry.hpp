#pragma once

#include <span>
#include <vector>

#include "lnabla/jet.hpp"

namespace lnabla {

/// Metric signature as (positive, negative) eigenvalue counts. Sign
/// convention: the first `plus` orthonormal directions carry +1, the rest
/// -1 (Lorentzian catalog entries put time last).
struct Signature {
    int plus = 0;
    int minus = 0;

    int n() const { return plus + minus; }
    double sign(int i) const { return i < plus ? 1.0 : -1.0; }
    bool operator==(const Signature&) const = default;
};

/// Symmetric n x n matrix of jets, packed upper triangle. Entries (i,j)
/// and (j,i) share storage, so symmetry is exact by construction.
class SymJetMatrix {
public:
    SymJetMatrix() = default;
    SymJetMatrix(int n, int order)
        : n_(n), c_(static_cast<size_t>(n * (n + 1) / 2), JetPoly(n, order)) {}

    int n() const { return n_; }
    int order() const { return c_.empty() ? 0 : c_[0].order(); }

    JetPoly& at(int i, int j) { return c_[static_cast<size_t>(index(i, j))]; }
    const JetPoly& at(int i, int j) const { return c_[static_cast<size_t>(index(i, j))]; }
    double value(int i, int j) const { return at(i, j).value(); }

    SymJetMatrix truncated(int new_order) const;

    int index(int i, int j) const {
        if (i > j) std::swap(i, j);
        return i * n_ - i * (i - 1) / 2 + (j - i);
    }

private:
    int n_ = 0;
    std::vector<JetPoly> c_;
};

/// Coefficient array C^i_jk of jets, symmetric in the lower pair (j,k).
/// Used for connections, for difference tensors, and for the symmetric
/// (2,1)-tensor arguments of the connection-variation check.
class ConnectionJet {
public:
    ConnectionJet() = default;
    ConnectionJet(int n, int order)
        : n_(n), c_(static_cast<size_t>(n) * (n * (n + 1) / 2), JetPoly(n, order)) {}

    int n() const { return n_; }
    int order() const { return c_.empty() ? 0 : c_[0].order(); }

    JetPoly& at(int i, int j, int k) { return c_[flat(i, j, k)]; }
    const JetPoly& at(int i, int j, int k) const { return c_[flat(i, j, k)]; }
    double value(int i, int j, int k) const { return at(i, j, k).value(); }

    ConnectionJet truncated(int new_order) const;
    bool zero() const;

private:
    size_t flat(int i, int j, int k) const {
        if (j > k) std::swap(j, k);
        const int pair = j * n_ - j * (j - 1) / 2 + (k - j);
        return static_cast<size_t>(i) * (n_ * (n_ + 1) / 2) + pair;
    }

    int n_ = 0;
    std::vector<JetPoly> c_;
};

/// Difference of two connections is a genuine tensor; it shares the
/// coefficient layout.
using DiffTensorJet = ConnectionJet;

/// Pseudo-Riemannian metric jet of a fixed signature. Construction
/// validates nondegeneracy at the base point and that the eigenvalue sign
/// count matches the declared signature.
class MetricJet {
public:
    MetricJet(SymJetMatrix g, Signature sig);

    int n() const { return g_.n(); }
    int order() const { return g_.order(); }
    const Signature& signature() const { return sig_; }

    const JetPoly& at(int i, int j) const { return g_.at(i, j); }
    JetPoly& at(int i, int j) { return g_.at(i, j); }
    double value(int i, int j) const { return g_.value(i, j); }
    const SymJetMatrix& components() const { return g_; }

    MetricJet truncated(int new_order) const { return MetricJet(g_.truncated(new_order), sig_); }

    /// Adds delta to the second-derivative coordinate y_ab,cd (and its
    /// symmetric copies).
    void perturb_second_derivative(int a, int b, int c, int d, double delta);

private:
    SymJetMatrix g_;
    Signature sig_;
};

SymJetMatrix inverse_metric(const MetricJet& g);
JetPoly det_jet(const SymJetMatrix& m);
JetPoly volume_density(const MetricJet& g);
ConnectionJet christoffel(const MetricJet& g);

/// Ricci tensor of a symmetric linear connection, dense row-major n x n
/// (not symmetric for a general connection).
std::vector<JetPoly> ricci(const ConnectionJet& gamma);

JetPoly scalar_curvature(const MetricJet& g);
DiffTensorJet difference_tensor(const MetricJet& g, const ConnectionJet& nab);

/// Scalar curvature of a symmetric connection taken with respect to g:
/// g^{jk} { d_i C^i_jk - d_j C^i_ik + C^l_jk C^i_il - C^l_ik C^i_jl }.
JetPoly pair_scalar_curvature(const MetricJet& g, const ConnectionJet& nab);

/// Dense (non-symmetric) n x n jet-matrix inverse by adjugate, n <= 4.
std::vector<JetPoly> inverse_dense(std::span<const JetPoly> m, int n);
JetPoly det_dense(std::span<const JetPoly> m, int n);

} // namespace lnabla
