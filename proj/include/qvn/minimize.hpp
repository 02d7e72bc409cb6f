#pragma once

#include <functional>
#include <vector>

namespace qvn {

struct MinimizeOptions {
    double x_tol = 1e-6;     // simplex size at which to stop
    int max_evaluations = 2000;
};

struct MinimizeResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

// Nelder-Mead simplex (GSL nmsimplex2) from x0 with initial step sizes.
MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& x0, const std::vector<double>& steps,
                           const MinimizeOptions& opt = {});

}  // namespace qvn
