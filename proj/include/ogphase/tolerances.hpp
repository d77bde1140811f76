#pragma once

namespace ogphase {

// Numerical cutoffs used across the library. Every structural check
// (hermiticity, unitarity, ...) and every definedness decision (nodal
// points, degeneracy) is tied to one of these knobs so a whole run can
// be tightened or loosened from a single place.
struct ToleranceConfig {
    double hermiticity = 1e-12;  // max |M - M^dag| entry
    double unitarity = 1e-10;    // max |U^dag U - I| entry, and |det - 1| for SU
    double psd_clamp = 1e-12;    // eigenvalues in [-psd_clamp, 0) clamp to 0
    double definedness = 1e-10;  // |z| below this => phase factor undefined
    double unit_trace = 1e-12;   // |Tr(rho) - 1|
    double degeneracy_gap = 1e-9;    // min eigenvalue gap for "nondegenerate"
    double orthogonality = 1e-9;     // max |<psi_k|U|psi_k>| for orthogonal states
    double isospectral = 1e-9;       // spectrum match for unitarily connected pairs
    double connected = 1e-9;         // |b - U a U^dag| for connection checks
    double transport = 1e-10;        // diagonal generator elements (parallel transport)
    double block = 1e-10;            // entry pattern cutoff in block decompositions
    double transport_endpoint = 1e-6;  // integrated endpoint vs supplied unitary
};

}  // namespace ogphase
