#include "tpg/fock/state.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "tpg/errors.hpp"

namespace tpg {

StateVector::StateVector(ModeLayout layout, std::vector<Entry> entries) : layout_(std::move(layout)) {
    std::sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) { return a.index < b.index; });
    for(const auto &e : entries) {
        if(e.index < 0 || e.index >= layout_.dimension()) throw UsageError("state entry index outside layout");
        if(!entries_.empty() && entries_.back().index == e.index) entries_.back().amplitude += e.amplitude;
        else entries_.push_back(e);
    }
    std::erase_if(entries_, [](const Entry &e) { return e.amplitude == cplx{}; });
}

StateVector StateVector::basis(const ModeLayout &layout, std::span<const int> occupation) {
    return StateVector(layout, {{layout.index(occupation), cplx{1.0}}});
}

StateVector StateVector::vacuum(const ModeLayout &layout) { return StateVector(layout, {{0, cplx{1.0}}}); }

StateVector StateVector::from_dense(const ModeLayout &layout, const VectorXc &amplitudes) {
    if(amplitudes.size() != layout.dimension()) throw UsageError("dense amplitude vector length does not match layout");
    std::vector<Entry> entries;
    for(index_t i = 0; i < amplitudes.size(); ++i)
        if(amplitudes[i] != cplx{}) entries.push_back({i, amplitudes[i]});
    return StateVector(layout, std::move(entries));
}

cplx StateVector::amplitude(index_t index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index, [](const Entry &e, index_t i) { return e.index < i; });
    return (it != entries_.end() && it->index == index) ? it->amplitude : cplx{};
}

std::vector<index_t> StateVector::support() const {
    std::vector<index_t> s;
    s.reserve(entries_.size());
    for(const auto &e : entries_) s.push_back(e.index);
    return s;
}

double StateVector::norm() const {
    double s = 0;
    for(const auto &e : entries_) s += std::norm(e.amplitude);
    return std::sqrt(s);
}

StateVector StateVector::normalized() const {
    const double n = norm();
    if(n == 0) throw InvalidStateError("cannot normalise the zero vector");
    return scaled(1.0 / n);
}

StateVector StateVector::scaled(cplx factor) const {
    StateVector out(layout_);
    out.entries_ = entries_;
    for(auto &e : out.entries_) e.amplitude *= factor;
    std::erase_if(out.entries_, [](const Entry &e) { return e.amplitude == cplx{}; });
    return out;
}

cplx StateVector::inner(const StateVector &other) const {
    if(!(layout_ == other.layout_)) throw UsageError("inner product between states on different layouts");
    cplx s{};
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while(a != entries_.end() && b != other.entries_.end()) {
        if(a->index < b->index) ++a;
        else if(b->index < a->index) ++b;
        else {
            s += std::conj(a->amplitude) * b->amplitude;
            ++a, ++b;
        }
    }
    return s;
}

VectorXc StateVector::to_dense(index_t max_dimension) const {
    if(layout_.dimension() > max_dimension)
        throw UsageError(fmt::format("layout dimension {} too large for a dense vector", layout_.dimension()));
    VectorXc v = VectorXc::Zero(layout_.dimension());
    for(const auto &e : entries_) v[e.index] = e.amplitude;
    return v;
}

double StateVector::top_level_mass(Mode mode, int levels) const {
    const auto pos = layout_.require(mode);
    const int  d   = layout_[pos].cutoff;
    double     s   = 0;
    for(const auto &e : entries_)
        if(layout_.level(e.index, pos) >= d - levels) s += std::norm(e.amplitude);
    return s;
}

std::vector<double> StateVector::level_distribution(Mode mode) const {
    const auto          pos = layout_.require(mode);
    std::vector<double> p(static_cast<std::size_t>(layout_[pos].cutoff), 0.0);
    for(const auto &e : entries_) p[static_cast<std::size_t>(layout_.level(e.index, pos))] += std::norm(e.amplitude);
    return p;
}

StateVector tensor(const StateVector &lhs, const StateVector &rhs) {
    std::vector<ModeSpec> specs = lhs.layout().modes();
    for(const auto &s : rhs.layout().modes()) specs.push_back(s);
    ModeLayout                      layout(std::move(specs));
    const index_t                   scale = rhs.layout().dimension();
    std::vector<StateVector::Entry> entries;
    entries.reserve(lhs.nonzeros() * rhs.nonzeros());
    for(const auto &a : lhs.entries())
        for(const auto &b : rhs.entries()) entries.push_back({a.index * scale + b.index, a.amplitude * b.amplitude});
    return StateVector(std::move(layout), std::move(entries));
}

double coherent_tail_mass(double alpha_abs, int cutoff) {
    // Sum the Poisson tail directly (avoids cancellation in 1 - head).
    const double mean = alpha_abs * alpha_abs;
    if(mean == 0) return 0.0;
    double log_term = -mean + cutoff * std::log(mean) - std::lgamma(cutoff + 1.0);
    double term     = std::exp(log_term);
    double tail     = 0;
    for(int n = cutoff; n < cutoff + 100000; ++n) {
        tail += term;
        term *= mean / (n + 1);
        if(n > mean && term < tail * 1e-17) break;
    }
    return tail;
}

int coherent_cutoff_for(double alpha_abs, double tolerance) {
    int d = 1;
    while(coherent_tail_mass(alpha_abs, d) >= tolerance) ++d;
    return d;
}

StateVector coherent_state(int cutoff, cplx alpha, double tolerance, Mode mode) {
    if(cutoff < 1) throw ConfigurationError("coherent state cutoff must be >= 1");
    const double tail = coherent_tail_mass(std::abs(alpha), cutoff);
    if(tail > tolerance) {
        const int need = coherent_cutoff_for(std::abs(alpha), tolerance);
        throw TruncationError(fmt::format("coherent state |alpha|={} loses tail mass {:.3e} at cutoff {} (tolerance {:.1e}); "
                                          "cutoff {} required",
                                          std::abs(alpha), tail, cutoff, tolerance, need),
                              need);
    }
    ModeLayout                      layout({{mode, cutoff}});
    std::vector<StateVector::Entry> entries;
    cplx                            c = std::exp(-0.5 * std::norm(alpha));
    for(int n = 0; n < cutoff; ++n) {
        if(n > 0) c *= alpha / std::sqrt(static_cast<double>(n));
        entries.push_back({n, c});
    }
    return StateVector(std::move(layout), std::move(entries)).normalized();
}

} // namespace tpg
