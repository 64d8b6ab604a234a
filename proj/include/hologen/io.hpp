#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hologen/bounds.hpp"
#include "hologen/certify.hpp"
#include "hologen/flows.hpp"
#include "hologen/numrange.hpp"

namespace hologen {

using Json = nlohmann::ordered_json;

/// Malformed input: carries the offending JSON path or line/column.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses text, reporting syntax errors with line and column.
Json parse_json_text(const std::string& text, const std::string& source = "<input>");
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

Complex parse_complex(const Json& j, const std::string& where);
Vector parse_vector(const Json& j, const std::string& where);
Matrix parse_matrix(const Json& j, const std::string& where);
/// {"dim": n, "p": number | "inf"}
NormedSpace parse_space(const Json& j, const std::string& where = "space");
/// {"space", "constant", "linear", "terms": [{"degree", "monomial", "coeff"}]}
PolyMap parse_map(const Json& j);

Json to_json(Complex c);
Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const NormedSpace& space);
Json to_json(const PolyMap& map);
Json to_json(const RangeEstimate& e);
Json to_json(const GeneratorVerdict& v);
Json to_json(const PDCertificate& c);
Json to_json(const BoundInputs& in);
/// Summary plus per-shell curve; per-sample rows only when requested.
Json to_json(const BoundReport& rep, bool with_rows = false);
Json to_json(const ChainReport& rep);
Json to_json(const FlowResult& res);
Json to_json(const SweepReport& rep);
Json to_json(const ProbeReport& rep);

/// Columns r, lhs_max, rhs_sharp, rhs_coarse.
std::string bound_curve_csv(const BoundReport& rep);

/// Shortest round-trip decimal form.
std::string format_double(double x);

}  // namespace hologen
