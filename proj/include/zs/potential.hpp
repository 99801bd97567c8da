#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "zs/grid.hpp"
#include "zs/types.hpp"

/// Schwartz-class test potentials (the phase space the scattering transform
/// acts on) and the first three conserved Hamiltonians.
namespace zs {

enum class PotentialKind { zero, sech, gaussian, box_smoothed, chirped_sech };

PotentialKind potential_kind_from_name(const std::string& name);

/**
 * A potential psi(x) sampled on a grid. `analytic` (optional) evaluates the
 * same function off the grid nodes; integrators use it for refined stepping.
 * `midpoints` holds psi at the n-1 cell midpoints, computed eagerly at
 * construction (from `analytic` when available, otherwise by band-limited
 * interpolation), so Potential stays immutable and freely shareable across
 * threads.
 */
struct Potential {
  ComplexField psi;
  std::string label;
  bool decay_ok = false;
  std::function<Complex(double)> analytic;  // may be empty
  std::vector<Complex> midpoints;

  static Potential from_samples(ComplexField field, std::string label);
  static Potential from_analytic(const Grid& g, std::function<Complex(double)> f,
                                 std::string label);

  const Grid& grid() const { return psi.grid; }
};

struct Hamiltonians {
  double h1 = 0.0;  // (1/2) integral |psi|^2
  double h2 = 0.0;  // (1/2i) integral conj(psi) psi'
  double h3 = 0.0;  // (1/2) integral |psi'|^2 + |psi|^4
};

/// Builds a catalogue potential. Recognized parameters by kind:
///   zero:         (none)
///   sech:         A (amplitude), w (width), x0 (center)
///   gaussian:     A, w, x0
///   box_smoothed: A, width (flat extent), k (edge steepness), x0
///   chirped_sech: A, w, x0, c (linear chirp: factor e^{i c x})
/// Rejects unknown keys and parameter sets that leave |psi| above the decay
/// threshold at the grid ends.
Potential make_potential(PotentialKind kind, const std::map<std::string, double>& params,
                         const Grid& g);

/// psi must have decayed at the boundary for the integrals to be meaningful.
Hamiltonians hamiltonians(const Potential& p);

/// Boundary decay threshold for decay_ok. The sech catalogue entry reaches
/// 2.1e-9 at |x| = 20, so the usable threshold sits above that.
inline constexpr double kPotentialDecayTol = 1e-8;

/// Names accepted by catalogue_potential (the default test trio).
std::vector<std::string> catalogue_names();

/// The default trio: "zero", "sech" (A = 0.5), "chirped_sech" (A = 0.5, c = 1).
Potential catalogue_potential(const std::string& name, const Grid& g);

}  // namespace zs
