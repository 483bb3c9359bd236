#include "tpg/dynamics/hamiltonian.hpp"

#include <cmath>

#include <fmt/format.h>

#include "tpg/errors.hpp"

namespace tpg {

std::string to_string(Process p) { return p == Process::TPG ? "TPG" : "SODC"; }
std::string to_string(PumpTreatment p) { return p == PumpTreatment::Classical ? "classical" : "quantized"; }

Process parse_process(std::string_view s) {
    if(s == "TPG" || s == "tpg") return Process::TPG;
    if(s == "SODC" || s == "sodc") return Process::SODC;
    throw ConfigurationError(fmt::format("unknown process '{}'", s));
}

PumpTreatment parse_pump(std::string_view s) {
    if(s == "classical") return PumpTreatment::Classical;
    if(s == "quantized") return PumpTreatment::Quantized;
    throw ConfigurationError(fmt::format("unknown pump treatment '{}'", s));
}

ModeSet required_modes(const HamiltonianSpec &spec) {
    ModeSet m = spec.process == Process::TPG ? ModeSet{Mode::A, Mode::B, Mode::C} : ModeSet{Mode::A, Mode::B};
    if(spec.pump == PumpTreatment::Quantized) m.push_back(Mode::P);
    return m;
}

Hamiltonian build_hamiltonian(const HamiltonianSpec &spec, const ModeLayout &layout) {
    if(spec.kappa < 0) throw ConfigurationError("coupling kappa must be >= 0");
    if(layout.labels() != required_modes(spec))
        throw ConfigurationError(fmt::format("{} with {} pump needs modes {}, layout has {}", to_string(spec.process),
                                             to_string(spec.pump), to_string(required_modes(spec)), to_string(layout.labels())));

    Hamiltonian h{spec, SparseOperator(layout), spec.kappa * std::abs(spec.alpha_p), {}};
    if(h.xi_rate == 0) h.warnings.push_back("kappa * |alpha_p| = 0: the interaction strength xi stays 0");

    // Creation part X† = a† b† [c†] [p]; H = i kappa (X† - X) with the c-number folded in.
    LadderTerm create{cplx{1.0}, {}};
    create.factors.push_back({layout.require(Mode::A), Ladder::Create});
    create.factors.push_back({layout.require(Mode::B), Ladder::Create});
    if(spec.process == Process::TPG) create.factors.push_back({layout.require(Mode::C), Ladder::Create});
    if(spec.pump == PumpTreatment::Quantized) create.factors.push_back({layout.require(Mode::P), Ladder::Annihilate});
    else create.coefficient = spec.alpha_p;

    SparseOperator raise(layout, {create});
    h.op = (raise - raise.adjoint()) * cplx{0.0, spec.kappa};
    return h;
}

StateVector initial_state(const HamiltonianSpec &spec, const ModeLayout &layout, double pump_tail_tolerance) {
    if(layout.labels() != required_modes(spec)) throw ConfigurationError("initial_state: layout does not match the process");
    if(spec.pump == PumpTreatment::Classical) return StateVector::vacuum(layout);
    const auto  converted = layout.sublayout([&] {
        auto m = required_modes(spec);
        m.pop_back();
        return m;
    }());
    const auto pump = coherent_state(layout.cutoff(Mode::P), spec.alpha_p, pump_tail_tolerance, Mode::P);
    return tensor(StateVector::vacuum(converted), pump);
}

ModeLayout process_layout(const HamiltonianSpec &spec, int mode_cutoff, int pump_cutoff) {
    std::vector<ModeSpec> specs;
    for(auto m : required_modes(spec)) specs.push_back({m, m == Mode::P ? pump_cutoff : mode_cutoff});
    return ModeLayout(std::move(specs));
}

} // namespace tpg
