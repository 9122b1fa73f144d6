#pragma once

#include <optional>

#include "crfuchs/jet.hpp"
#include "crfuchs/linalg.hpp"
#include "crfuchs/report.hpp"

namespace crfuchs {

/// Variable list (x, y1..yn) shared by the components of one system.
VarsPtr bb_space(int n);

/// x y' = F(x, y) with F holomorphic at 0.
struct BBSystem {
    int n = 1;
    std::vector<Jet> F; // jets over bb_space(n)

    /// Principal matrix F_y(0, 0).
    GRatMatrix principal_matrix() const;
};

struct ResonanceEvent {
    int k = 0;            // resonant level
    int kernel_dim = 0;   // freedom introduced at this level
    bool consistent = true;
};

struct ResonanceReport {
    std::vector<GaussianRational> rational_eigenvalues; // exact, via the characteristic polynomial
    bool spectrum_complete = false;                     // all n eigenvalues rational
    std::vector<int> resonances;                        // positive integer eigenvalues
};

ResonanceReport analyze_resonances(const BBSystem& sys);

struct FormalSolution {
    bool complete = true;              // false: blocked at an inconsistent level
    int blocked_at = -1;               // k with no solvable branch (when !complete)
    std::vector<Jet> y;                // jets in x (partial when !complete)
    std::vector<ResonanceEvent> resonances;
};

/// Power-series solution y(x) = sum_{k>=1} a_k x^k via the recursion
/// (kI - A) a_k = [x^k] F(x, y_{<k}). At resonant k the consistent part is
/// solved and kernel directions default to zero. The residual
/// x y' - F(x, y) = O(x^{N+1}) is replayed on success.
FormalSolution formal_solve(const BBSystem& sys, int N);

enum class SingularityClass { Nonsingular, Fuchsian, MeromorphicNonFuchsian };

/// y'(x) = A(x) y(x) with A = pole-part + holomorphic jet, entrywise
/// A_ij = laurent[i][j] / x^{pole_order}.
struct LinearSingularSystem {
    int n = 1;
    int pole_order = 0;          // p >= 0
    std::vector<std::vector<Jet>> numerator; // jets in x; A = numerator / x^p

    /// Effective pole order after cancelling common x factors.
    int effective_pole_order() const;
};

SingularityClass classify_linear(const LinearSingularSystem& sys);

struct TrajectoryPoint {
    double x = 0;
    std::vector<std::complex<double>> y;
};

struct Trajectory {
    std::vector<TrajectoryPoint> samples; // decreasing x, log-uniform grid
    bool truncated = false;               // integration stopped early
    std::string note;
};

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int grid_points = 61;
    double escape_radius = 1e6;
};

/// Integrates dy/dt = F(e^t, y) from t = ln a down to t = ln x_min with an
/// adaptive embedded Runge-Kutta pair; complex systems are split into real
/// and imaginary parts.
Trajectory numeric_integrate(const BBSystem& sys, const std::vector<std::complex<double>>& y_a,
                             double a, double x_min, const IntegrateOptions& opt = {});

struct FlatnessReport {
    double C = 0;        // |F(x,y)| <= C |y| on the observed tube
    double Ctilde = 0;   // |y(a)| / a^C
    double margin = 0;   // min over samples of |y(x)| / (Ctilde x^C)
    bool bound_holds = false;
    Trajectory trajectory;
};

/// Realizes the quantitative lower bound |y(x)| >= Ctilde x^C excluding flat
/// nonzero solutions: C comes from a degree-wise majorant of F on the tube
/// {|y| <= 2 max |y|}, not from sampling.
FlatnessReport flatness_experiment(const BBSystem& sys,
                                   const std::vector<std::complex<double>>& y_a, double a,
                                   double x_min, const IntegrateOptions& opt = {});

} // namespace crfuchs
