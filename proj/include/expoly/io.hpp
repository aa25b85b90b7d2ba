#ifndef EXPOLY_IO_HPP
#define EXPOLY_IO_HPP

#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "expoly/recovery.hpp"

namespace expoly {

using ordered_json = nlohmann::ordered_json;

// ---- polynomial formats --------------------------------------------------------
// text:  "re,im:e1,...,es;re,im:e1,...,es"  (terms joined by ';')
// json:  { "terms": [ { "exp": [..], "re": .., "im": .. } ] }, optional
//        "basis": "falling" for Newton-form input

std::string poly_to_text(const Poly& p);
Poly poly_from_text(const std::string& text, int dim = -1); // dim -1: infer

ordered_json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j, int dim = -1);

// ---- model json ------------------------------------------------------------------
// { "dim": s, "components": [ { "omega": [[re,im],...], "poly": <poly> } ] }
// "poly" accepts the object form or the text form as a string.

ordered_json model_to_json(const ExpPolyModel& m);
ExpPolyModel model_from_json(const nlohmann::json& j);
ExpPolyModel load_model(const std::string& path);

// ---- reconstruction output ---------------------------------------------------------

ordered_json ideal_to_json(const IdealData& ideal);
ordered_json report_to_json(const Report& report);

// model + "ideal" + "report" blocks; parseable by model_from_json
ordered_json reconstruction_to_json(const ExpPolyModel& m, const IdealData& ideal,
                                    const Report& report);

// ---- sample CSV ------------------------------------------------------------------
// header a1,...,as,re,im; one grid point per row; LF endings; %.17g numbers

void write_samples_csv(std::ostream& os, int dim, const std::vector<std::vector<int>>& points,
                       const std::vector<cplx>& values);

// dense box required; sparse or ragged grids are parse errors
TableSource read_samples_csv(std::istream& is);
TableSource load_samples(const std::string& path);

// deterministic float formatting used across all outputs
std::string format_double(double x);

} // namespace expoly

#endif
