#include "realdyn/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "realdyn/error.hpp"

namespace realdyn {

Complex evaluate_polynomial(std::span<const Complex> coeffs, Complex z)
{
    Complex acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

double relative_residual(std::span<const Complex> coeffs, Complex z)
{
    double scale = 0.0;
    const double r = std::abs(z);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        scale = scale * r + std::abs(*it);
    if (scale == 0.0)
        return 0.0;
    return std::abs(evaluate_polynomial(coeffs, z)) / scale;
}

namespace {

// p(z) and p'(z) in one pass.
std::pair<Complex, Complex> eval_with_derivative(std::span<const Complex> coeffs, Complex z)
{
    Complex p{0.0, 0.0};
    Complex dp{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

std::vector<Complex> initial_guesses(std::span<const Complex> coeffs)
{
    const std::size_t n = coeffs.size() - 1;
    // Start on a circle whose radius is the geometric mean of the root moduli,
    // falling back to the Cauchy bound when the constant term vanishes.
    double radius = 0.0;
    if (std::abs(coeffs.front()) > 0.0) {
        radius = std::pow(std::abs(coeffs.front()) / std::abs(coeffs.back()), 1.0 / static_cast<double>(n));
    } else {
        for (std::size_t k = 0; k < n; ++k)
            radius = std::max(radius, std::abs(coeffs[k]) / std::abs(coeffs.back()));
        radius = 1.0 + radius;
    }
    if (!(radius > 0.0) || !std::isfinite(radius))
        radius = 1.0;
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = std::polar(radius, angle);
    }
    return z;
}

}  // namespace

RootSet find_roots(std::span<const Complex> coeffs, const RootOptions& options)
{
    if (coeffs.size() < 2 || coeffs.back() == Complex{0.0, 0.0})
        throw Error(ErrorCode::InvalidParameter, "polynomial must have degree >= 1 and nonzero leading coefficient");

    const std::size_t n = coeffs.size() - 1;
    RootSet out;
    out.roots = initial_guesses(coeffs);
    auto& z = out.roots;

    std::vector<bool> settled(n, false);
    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        out.iterations = iter;
        bool all_settled = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (settled[i])
                continue;
            auto [p, dp] = eval_with_derivative(coeffs, z[i]);
            if (p == Complex{0.0, 0.0}) {
                settled[i] = true;
                continue;
            }
            const Complex ratio = p / dp;
            Complex repulsion{0.0, 0.0};
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && z[i] != z[j])
                    repulsion += 1.0 / (z[i] - z[j]);
            }
            Complex step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
                step = ratio;
            z[i] -= step;
            if (std::abs(step) <= options.tolerance * std::max(1.0, std::abs(z[i])))
                settled[i] = true;
            else
                all_settled = false;
        }
        if (all_settled) {
            out.converged = true;
            break;
        }
    }

    out.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.residuals[i] = relative_residual(coeffs, z[i]);

    if (!out.converged) {
        // Multiple roots converge only linearly and their clouds jitter at the
        // eps^(1/k) level; accept when the backward error is still tiny.
        const double worst = *std::max_element(out.residuals.begin(), out.residuals.end());
        if (worst <= 1e-12) {
            out.converged = true;
        } else {
            std::ostringstream msg;
            msg << "Aberth iteration did not converge after " << options.max_iterations
                << " iterations; residuals:";
            for (double r : out.residuals)
                msg << ' ' << r;
            throw Error(ErrorCode::RootFindingFailed, msg.str());
        }
    }
    return out;
}

std::vector<ClusteredRoot> cluster_roots(std::span<const Complex> roots, double radius)
{
    std::vector<int> label(roots.size(), -1);
    std::vector<ClusteredRoot> clusters;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (label[i] >= 0)
            continue;
        const int id = static_cast<int>(clusters.size());
        label[i] = id;
        // Transitive closure so chains of nearby approximations merge.
        std::vector<std::size_t> members{i};
        for (std::size_t k = 0; k < members.size(); ++k) {
            for (std::size_t j = 0; j < roots.size(); ++j) {
                if (label[j] < 0
                    && std::abs(roots[j] - roots[members[k]]) <= radius * std::max(1.0, std::abs(roots[j])))
                {
                    label[j] = id;
                    members.push_back(j);
                }
            }
        }
        Complex sum{0.0, 0.0};
        for (auto m : members)
            sum += roots[m];
        clusters.push_back({sum / static_cast<double>(members.size()), static_cast<int>(members.size())});
    }
    return clusters;
}

std::vector<ClusteredRoot> real_roots(std::span<const double> coeffs, double imag_tolerance)
{
    std::vector<Complex> c(coeffs.begin(), coeffs.end());
    while (!c.empty() && c.back() == Complex{0.0, 0.0})
        c.pop_back();
    if (c.size() < 2)
        return {};
    const auto set = find_roots(c);
    std::vector<ClusteredRoot> out;
    for (const auto& root : cluster_roots(set.roots)) {
        if (std::abs(root.value.imag()) <= imag_tolerance * std::max(1.0, std::abs(root.value)))
            out.push_back({Complex{root.value.real(), 0.0}, root.multiplicity});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value.real() < b.value.real(); });
    return out;
}

}  // namespace realdyn
