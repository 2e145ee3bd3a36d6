#include "fraclab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

double off_norm(const std::vector<double>& A, int n) {
    double acc = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            const double a = A[static_cast<std::size_t>(p) * n + q];
            acc += 2.0 * a * a;
        }
    return std::sqrt(acc);
}

double frob_norm(const std::vector<double>& A) {
    double acc = 0.0;
    for (double a : A) acc += a * a;
    return std::sqrt(acc);
}

// Rotation angle for annihilating A[p][q]; returns (c, s) of the Givens pair.
std::pair<double, double> rotation(double app, double aqq, double apq) {
    if (apq == 0.0) return {1.0, 0.0};
    const double theta = (aqq - app) / (2.0 * apq);
    const double t = (theta >= 0.0)
                         ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                         : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c};
}

// Applies J^T A J and V <- V J for the rotation in the (p, q) plane.
void apply_rotation(std::vector<double>& A, std::vector<double>& V, int n,
                    int p, int q, double c, double s) {
    double* rp = A.data() + static_cast<std::size_t>(p) * n;
    double* rq = A.data() + static_cast<std::size_t>(q) * n;
    for (int k = 0; k < n; ++k) {
        const double akp = rp[k], akq = rq[k];
        rp[k] = c * akp - s * akq;
        rq[k] = s * akp + c * akq;
    }
    for (int k = 0; k < n; ++k) {
        double* row = A.data() + static_cast<std::size_t>(k) * n;
        const double akp = row[p], akq = row[q];
        row[p] = c * akp - s * akq;
        row[q] = s * akp + c * akq;
    }
    for (int k = 0; k < n; ++k) {
        double* row = V.data() + static_cast<std::size_t>(k) * n;
        const double vkp = row[p], vkq = row[q];
        row[p] = c * vkp - s * vkq;
        row[q] = s * vkp + c * vkq;
    }
}

void extract_sorted(std::vector<double>& A, std::vector<double>& V, int n,
                    std::vector<double>& evals) {
    evals.resize(n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = A[static_cast<std::size_t>(i) * n + i];
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return diag[a] < diag[b]; });
    std::vector<double> Vs(V.size());
    for (int j = 0; j < n; ++j) {
        evals[j] = diag[order[j]];
        for (int i = 0; i < n; ++i)
            Vs[static_cast<std::size_t>(i) * n + j] =
                V[static_cast<std::size_t>(i) * n + order[j]];
    }
    V.swap(Vs);
}

}  // namespace

void jacobi_eigensolve_serial(std::vector<double>& A, int n,
                              std::vector<double>& evals,
                              std::vector<double>& V, double tol,
                              int max_sweeps) {
    require(A.size() == static_cast<std::size_t>(n) * n, "ShapeMismatch",
            "matrix must be n x n");
    V.assign(A.size(), 0.0);
    for (int i = 0; i < n; ++i) V[static_cast<std::size_t>(i) * n + i] = 1.0;
    const double scale = frob_norm(A);
    if (scale == 0.0 || n == 1) {
        extract_sorted(A, V, n, evals);
        return;
    }
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm(A, n) <= tol * scale) {
            extract_sorted(A, V, n, evals);
            return;
        }
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = A[static_cast<std::size_t>(p) * n + q];
                if (std::abs(apq) <= 0.1 * tol * scale / n) continue;
                auto [c, s] =
                    rotation(A[static_cast<std::size_t>(p) * n + p],
                             A[static_cast<std::size_t>(q) * n + q], apq);
                apply_rotation(A, V, n, p, q, c, s);
            }
    }
    require(off_norm(A, n) <= tol * scale, "EigensolverNoConvergence",
            "Jacobi sweeps did not converge");
    extract_sorted(A, V, n, evals);
}

void jacobi_eigensolve_parallel(std::vector<double>& A, int n,
                                std::vector<double>& evals,
                                std::vector<double>& V, double tol,
                                int max_sweeps) {
    require(A.size() == static_cast<std::size_t>(n) * n, "ShapeMismatch",
            "matrix must be n x n");
    V.assign(A.size(), 0.0);
    for (int i = 0; i < n; ++i) V[static_cast<std::size_t>(i) * n + i] = 1.0;
    const double scale = frob_norm(A);
    if (scale == 0.0 || n == 1) {
        extract_sorted(A, V, n, evals);
        return;
    }

    // Round-robin tournament: m-1 rounds of m/2 disjoint pairs cover every
    // (p, q) once per sweep.  Position 0 is fixed; the rest rotate.
    const int m = (n % 2 == 0) ? n : n + 1;  // pad with a ghost index n
    std::vector<int> seat(m);
    std::iota(seat.begin(), seat.end(), 0);
    std::vector<double> cs(m / 2), sn(m / 2);
    std::vector<int> pp(m / 2), qq(m / 2);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_norm(A, n) <= tol * scale) {
            extract_sorted(A, V, n, evals);
            return;
        }
        std::iota(seat.begin(), seat.end(), 0);
        for (int round = 0; round < m - 1; ++round) {
            int npairs = 0;
            for (int i = 0; i < m / 2; ++i) {
                int p = seat[i], q = seat[m - 1 - i];
                if (p > q) std::swap(p, q);
                if (q >= n) continue;  // ghost seat
                const double apq = A[static_cast<std::size_t>(p) * n + q];
                if (std::abs(apq) <= 0.1 * tol * scale / n) continue;
                auto [c, s] =
                    rotation(A[static_cast<std::size_t>(p) * n + p],
                             A[static_cast<std::size_t>(q) * n + q], apq);
                pp[npairs] = p;
                qq[npairs] = q;
                cs[npairs] = c;
                sn[npairs] = s;
                ++npairs;
            }
            // The pairs of one round are disjoint, so the row phase touches
            // disjoint rows and the column phase disjoint columns; the two
            // phases together realize J^T A J for the whole round exactly.
#pragma omp parallel for schedule(static)
            for (int i = 0; i < npairs; ++i) {
                const int p = pp[i], q = qq[i];
                const double c = cs[i], s = sn[i];
                double* rp = A.data() + static_cast<std::size_t>(p) * n;
                double* rq = A.data() + static_cast<std::size_t>(q) * n;
                for (int k = 0; k < n; ++k) {
                    const double akp = rp[k], akq = rq[k];
                    rp[k] = c * akp - s * akq;
                    rq[k] = s * akp + c * akq;
                }
            }
#pragma omp parallel for schedule(static)
            for (int i = 0; i < npairs; ++i) {
                const int p = pp[i], q = qq[i];
                const double c = cs[i], s = sn[i];
                for (int k = 0; k < n; ++k) {
                    double* row = A.data() + static_cast<std::size_t>(k) * n;
                    const double akp = row[p], akq = row[q];
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double* row = V.data() + static_cast<std::size_t>(k) * n;
                    const double vkp = row[p], vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
            // Advance the tournament: seat 0 fixed, others rotate by one.
            const int last = seat[m - 1];
            for (int i = m - 1; i > 1; --i) seat[i] = seat[i - 1];
            seat[1] = last;
        }
    }
    require(off_norm(A, n) <= tol * scale, "EigensolverNoConvergence",
            "Jacobi sweeps did not converge");
    extract_sorted(A, V, n, evals);
}

}  // namespace fraclab
