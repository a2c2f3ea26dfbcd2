#pragma once

#include <complex>
#include <span>
#include <vector>

namespace realdyn {

using Complex = std::complex<double>;

/// Horner evaluation; coefficients in ascending order of degree.
Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex z);

/// Backward-error residual |p(z)| / sum_k |a_k| |z|^k.
double relative_residual(std::span<const Complex> coeffs, Complex z);

struct RootOptions {
    int max_iterations = 500;
    double tolerance = 1e-15;
};

struct RootSet {
    std::vector<Complex> roots;       // counted with multiplicity, size == degree
    std::vector<double> residuals;    // relative_residual per root
    int iterations = 0;
    bool converged = false;
};

/// All complex roots of a polynomial by Aberth-Ehrlich simultaneous iteration.
/// The leading coefficient must be nonzero. Throws RootFindingFailed when the
/// iteration stalls, with residuals in the message.
RootSet find_roots(std::span<const Complex> coeffs, const RootOptions& options = {});

struct ClusteredRoot {
    Complex value;
    int multiplicity = 1;
};

/// Groups approximations of a multiple root (which Aberth returns as a small
/// cloud of radius ~eps^(1/k)) and replaces each cluster by its centroid.
std::vector<ClusteredRoot> cluster_roots(std::span<const Complex> roots, double radius = 1e-6);

/// Real roots (with multiplicity) of a real polynomial, ascending.
std::vector<ClusteredRoot> real_roots(std::span<const double> coeffs, double imag_tolerance = 1e-9);

}  // namespace realdyn
