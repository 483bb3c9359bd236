#include "tpg/conditioning/homodyne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "tpg/errors.hpp"
#include "tpg/fock/hermite.hpp"
#include "tpg/gaussian/covariance.hpp"
#include "tpg/ng/measures.hpp"
#include "tpg/util/parallel.hpp"

namespace tpg {

std::vector<double> quadrature_eigenvector(int cutoff, double x) {
    if(cutoff < 1) throw UsageError("quadrature_eigenvector: cutoff must be >= 1");
    return hermite_functions(cutoff, x);
}

ConditionalResult homodyne_project(const StateVector &psi, double x_c, Mode measured) {
    const auto &layout = psi.layout();
    (void)layout.require(Mode::A);
    (void)layout.require(Mode::B);
    if(measured == Mode::A || measured == Mode::B) throw UsageError("homodyne_project: measured mode must differ from A and B");
    ModeSet rest;
    for(auto m : layout.labels())
        if(m != measured) rest.push_back(m);
    const IndexSplitter split(layout, rest);
    const auto          pos = layout.require(measured);
    const auto          h   = quadrature_eigenvector(layout[pos].cutoff, x_c);

    std::vector<StateVector::Entry> entries;
    entries.reserve(psi.nonzeros());
    for(const auto &e : psi.entries()) {
        const auto [kept, dropped] = split.split(e.index);
        (void)dropped;
        entries.push_back({kept, e.amplitude * h[static_cast<std::size_t>(layout.level(e.index, pos))]});
    }
    StateVector  projected(split.first(), std::move(entries));
    const double n = projected.norm();
    if(!(n * n >= 1e-300)) throw UnderflowError(fmt::format("outcome density at x_c={} underflows", x_c));

    ConditionalResult r;
    r.x_c         = x_c;
    r.density     = n * n;
    r.conditional = projected.scaled(1.0 / n);
    r.state_ab    = rest.size() == 2 ? DensityOperator::pure(r.conditional) : partial_trace(r.conditional, {Mode::A, Mode::B});
    return r;
}

std::vector<SweepRow> conditional_sweep(const StateVector &psi, std::span<const double> x_grid, const SweepMeasures &measures,
                                        int threads) {
    constexpr double      nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<SweepRow> rows(x_grid.size());
    util::parallel_for(x_grid.size(), threads, [&](std::size_t i) {
        SweepRow &row = rows[i];
        row.x_c       = x_grid[i];
        row.density = row.qre2 = row.qre1 = row.log_negativity = row.steering_R = nan;
        auto flag = [&](const char *tag, const std::exception &e) {
            std::string msg = e.what();
            std::replace_if(msg.begin(), msg.end(), [](char ch) { return ch == ',' || ch == ';' || ch == '\n' || ch == '"'; }, ' ');
            row.flags += fmt::format("{}{}:{}", row.flags.empty() ? "" : ";", tag, msg);
        };
        if(!std::isfinite(x_grid[i])) {
            row.flags = "non-finite outcome";
            return;
        }
        ConditionalResult c;
        try {
            c           = homodyne_project(psi, x_grid[i]);
            row.density = c.density;
        } catch(const Error &e) {
            flag("projection", e);
            return;
        }
        auto guarded = [&](bool wanted, double &slot, const char *tag, auto &&fn) {
            if(!wanted) return;
            try {
                slot = fn();
            } catch(const Error &e) {
                flag(tag, e);
            }
        };
        guarded(measures.qre2, row.qre2, "qre2", [&] { return qre(c.state_ab, {Mode::A, Mode::B}); });
        guarded(measures.qre1, row.qre1, "qre1", [&] { return qre(c.state_ab, {Mode::A}); });
        guarded(measures.log_negativity, row.log_negativity, "log_negativity", [&] { return log_negativity(c.state_ab, {Mode::A}); });
        guarded(measures.steering, row.steering_R, "steering_R", [&] { return steering_R(c.state_ab, Mode::A, Mode::B).R; });
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::string out = "x_c,density,qre2,qre1,log_negativity,steering_R,flags\n";
    for(const auto &r : rows)
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{}\n", r.x_c, r.density, r.qre2, r.qre1, r.log_negativity,
                           r.steering_R, r.flags);
    return out;
}

} // namespace tpg
