#include "qvn/minimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qvn {

namespace {

struct Ctx {
    const std::function<double(const std::vector<double>&)>* f;
    std::vector<double> buf;
    int evals = 0;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
};

double trampoline(const gsl_vector* v, void* p) {
    auto* c = static_cast<Ctx*>(p);
    for (size_t i = 0; i < c->buf.size(); ++i) c->buf[i] = gsl_vector_get(v, i);
    double y = (*c->f)(c->buf);
    ++c->evals;
    if (!std::isfinite(y)) y = std::numeric_limits<double>::max();
    if (y < c->best_f) {
        c->best_f = y;
        c->best_x = c->buf;
    }
    return y;
}

}  // namespace

MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                           const std::vector<double>& x0, const std::vector<double>& steps,
                           const MinimizeOptions& opt) {
    const size_t n = x0.size();
    if (n == 0 || steps.size() != n) throw std::invalid_argument("nelder_mead: bad dimensions");
    gsl_set_error_handler_off();
    Ctx ctx{&f, std::vector<double>(n), 0, std::numeric_limits<double>::infinity(), x0};

    gsl_multimin_function fn;
    fn.n = n;
    fn.f = trampoline;
    fn.params = &ctx;
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* ss = gsl_vector_alloc(n);
    for (size_t i = 0; i < n; ++i) {
        gsl_vector_set(x, i, x0[i]);
        gsl_vector_set(ss, i, steps[i]);
    }
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, ss);

    MinimizeResult r;
    while (ctx.evals < opt.max_evaluations) {
        if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), opt.x_tol) == GSL_SUCCESS) {
            r.converged = true;
            break;
        }
    }
    r.x = ctx.best_x;
    r.f = ctx.best_f;
    r.evaluations = ctx.evals;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(ss);
    return r;
}

}  // namespace qvn
