#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

namespace amvp::scenarios::detail {

struct NmOptions {
    int max_evals = 500;
    double f_tol = 1e-12;
};

struct NmResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evals = 0;
};

/// Derivative-free simplex minimizer (Nelder-Mead with standard coefficients).
/// Box constraints are the caller's responsibility, typically via penalty
/// terms inside f.
template <class F>
NmResult nelder_mead(F&& f, const Eigen::VectorXd& x0, const Eigen::VectorXd& step,
                     NmOptions opts = {}) {
    const Eigen::Index dim = x0.size();
    const auto n_vertices = static_cast<std::size_t>(dim + 1);
    std::vector<Eigen::VectorXd> xs(n_vertices, x0);
    std::vector<double> fs(n_vertices);
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };
    fs[0] = eval(xs[0]);
    for (Eigen::Index i = 0; i < dim; ++i) {
        xs[static_cast<std::size_t>(i) + 1](i) += step(i);
        fs[static_cast<std::size_t>(i) + 1] = eval(xs[static_cast<std::size_t>(i) + 1]);
    }

    std::vector<std::size_t> order(n_vertices);
    while (evals < opts.max_evals) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[n_vertices - 2];
        if (fs[worst] - fs[best] <= opts.f_tol * (1.0 + std::fabs(fs[best]))) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
        for (std::size_t k = 0; k < n_vertices; ++k) {
            if (k != worst) centroid += xs[k];
        }
        centroid /= static_cast<double>(dim);

        const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
        const double f_reflected = eval(reflected);
        if (f_reflected < fs[best]) {
            const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
            const double f_expanded = eval(expanded);
            if (f_expanded < f_reflected) {
                xs[worst] = expanded;
                fs[worst] = f_expanded;
            } else {
                xs[worst] = reflected;
                fs[worst] = f_reflected;
            }
        } else if (f_reflected < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = f_reflected;
        } else {
            const Eigen::VectorXd contracted = centroid + 0.5 * (xs[worst] - centroid);
            const double f_contracted = eval(contracted);
            if (f_contracted < fs[worst]) {
                xs[worst] = contracted;
                fs[worst] = f_contracted;
            } else {
                for (std::size_t k = 0; k < n_vertices; ++k) {
                    if (k == best) continue;
                    xs[k] = xs[best] + 0.5 * (xs[k] - xs[best]);
                    fs[k] = eval(xs[k]);
                }
            }
        }
    }

    const auto best_it = std::min_element(fs.begin(), fs.end());
    NmResult out;
    out.x = xs[static_cast<std::size_t>(best_it - fs.begin())];
    out.value = *best_it;
    out.evals = evals;
    return out;
}

}  // namespace amvp::scenarios::detail
