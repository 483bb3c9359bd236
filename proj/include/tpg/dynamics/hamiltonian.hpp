#pragma once

#include <string>
#include <vector>

#include "tpg/fock/operator.hpp"

namespace tpg {

enum class Process { TPG, SODC };
enum class PumpTreatment { Classical, Quantized };

std::string   to_string(Process p);
std::string   to_string(PumpTreatment p);
Process       parse_process(std::string_view s);
PumpTreatment parse_pump(std::string_view s);

/// Down-conversion Hamiltonian parameters (hbar = 1).
struct HamiltonianSpec {
    Process       process = Process::TPG;
    PumpTreatment pump    = PumpTreatment::Quantized;
    cplx          alpha_p{4.0}; ///< pump amplitude; the c-number in the classical case
    double        kappa = 1.0;  ///< coupling, inverse time
};

struct Hamiltonian {
    HamiltonianSpec          spec;
    SparseOperator           op;
    double                   xi_rate = 0; ///< d(xi)/dt = kappa |alpha_p|
    std::vector<std::string> warnings;
};

/// Modes the process needs: TPG -> A,B,C ; SODC -> A,B ; plus P for a quantized pump.
ModeSet required_modes(const HamiltonianSpec &spec);

/// TPG quantized:  i kappa (a†b†c† p - a b c p†)
/// TPG classical:  i kappa (alpha a†b†c† - alpha* a b c)
/// SODC drops c.  Throws ConfigurationError if the layout's modes differ from required_modes.
Hamiltonian build_hamiltonian(const HamiltonianSpec &spec, const ModeLayout &layout);

/// Converted modes in vacuum, pump (if quantized) in the coherent state alpha_p.
/// Throws TruncationError if the pump cutoff loses more than `pump_tail_tolerance`.
StateVector initial_state(const HamiltonianSpec &spec, const ModeLayout &layout, double pump_tail_tolerance = 1e-8);

/// Default layout for a process: every converted mode at `mode_cutoff`, pump at `pump_cutoff`.
ModeLayout process_layout(const HamiltonianSpec &spec, int mode_cutoff, int pump_cutoff = 0);

} // namespace tpg
