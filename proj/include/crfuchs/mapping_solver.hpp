#pragma once

#include <map>
#include <optional>
#include <variant>

#include "crfuchs/map_transform.hpp"

namespace crfuchs {

/// The four one-variable functions determining a normalized map:
/// f0(w) = f(0,w), f1(w) = f_z(0,w), g0(w), g1(w) = g_z(0,w).
struct CauchyData {
    int m = 1;
    Jet f0, f1, g0, g1; // jets over w_space

    ValidationReport validate() const;
};

CauchyData cauchy_data_of(const NormalizedMap& H);

/// Completes Cauchy data to the unique normalized map compatible with the
/// source ODE: for each k the pair (f_{k+2}, g_{k+2}) is solved from the
/// zeta^0 / zeta^1 slots of the transformation rule (the PDE-system
/// recursion). The result transforms e_star into an ODE of the singular
/// shape, which makes push_forward's O(zeta^2) invariant hold.
NormalizedMap complete_normalized_map(const SingularODE& e_star, const CauchyData& data);

/// One unknown Taylor coefficient of a normalized map.
struct MapSlot {
    char func = 'f'; // 'f', 'g', '0' (= g0)
    int a = 0;       // z-degree (0 for g0)
    int b = 0;       // w-degree

    std::string str() const;
    static std::optional<MapSlot> parse(const std::string& s);
    auto operator<=>(const MapSlot&) const = default;
};

using FreeParams = std::map<std::string, GaussianRational>;

/// Every coefficient of H keyed by slot string; superset of any free-slot set.
FreeParams free_params_from(const NormalizedMap& H);

struct Obstruction {
    int order = 0;      // total (z,w)-order of the blocking residual slot
    std::string detail; // the failed linear equation / residual monomial
};

struct SolvedMap {
    NormalizedMap H;
    std::vector<MapSlot> free_slots; // unconstrained coefficients (assigned)
    int iterations = 0;
};

using MapSolveResult = std::variant<SolvedMap, Obstruction>;

/// Solves the transformation-rule identity for a normalized map sending
/// e_star to e, degree by degree via exact Newton iteration on the map
/// coefficients. Unconstrained coefficients take values from `free`
/// (default 0) and are reported. Works modulo the common truncation of the
/// two defining functions; `map_cap` bounds the total degree of map
/// coefficients (-1: use the truncation's total cap).
MapSolveResult solve_formal_map(const SingularODE& e_star, const SingularODE& e,
                                const FreeParams& free = {}, int map_cap = -1);

} // namespace crfuchs
