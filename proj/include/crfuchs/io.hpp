#pragma once

#include <string>

#include "json.hpp"

#include "crfuchs/briot_bouquet.hpp"
#include "crfuchs/hypersurface.hpp"
#include "crfuchs/map_transform.hpp"

namespace crfuchs {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

Json jet_to_json(const Jet& a);
Jet jet_from_json(const Json& j);

Json hypersurface_to_json(const RealAdmissibleForm& h);
Json hypersurface_to_json(const ComplexDefiningForm& t);
Json hypersurface_to_json(const ExponentialForm& x);

/// Tagged union of the three hypersurface forms.
struct HypersurfaceFile {
    std::string form; // "real" | "complex" | "exponential"
    RealAdmissibleForm real;
    ComplexDefiningForm cplx;
    ExponentialForm expo;
};
HypersurfaceFile hypersurface_from_json(const Json& j);

Json ode_to_json(const SingularODE& e);
SingularODE ode_from_json(const Json& j);

Json map_to_json(const NormalizedMap& H);
Json map_to_json(const GeneralMap& H);
struct MapFile {
    std::string kind; // "normalized" | "general"
    int m = 1;
    NormalizedMap normalized;
    GeneralMap general;
};
MapFile map_from_json(const Json& j);

Json bb_to_json(const BBSystem& sys);
BBSystem bb_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

/// Converts all coefficients to float64 (for --arith float64 pipelines).
Jet jet_to_float(const Jet& a);

} // namespace crfuchs
