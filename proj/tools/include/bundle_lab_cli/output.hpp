#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bundle_lab/classify.hpp"
#include "bundle_lab/geometry.hpp"
#include "bundle_lab/weights.hpp"

namespace bundle_lab::cli {

using Json = nlohmann::json;  // std::map backed, so keys come out sorted

/// Finite values as numbers; inf and nan as the strings "inf", "-inf", "nan".
Json number(double x);
Json encode(cplx z);
Json encode(const std::vector<cplx>& zs);
Json encode(const BlaschkeProduct& b);
Json encode(const MoebiusTransform& phi);
Json encode(const GrowthReport& g);
Json encode(const RieszReport& r);
Json encode(const SimilarityCertificate& c);
Json encode(const Decomposition& d);
Json encode(const JordanResult& j);
Json encode(const MoebiusMatch& m);
Json encode(const Verdict& v);
Json encode(const KaplanskyResult& k);
Json encode(const CounterexampleReport& r);
Json encode(const IndexMap& map);  // summary without the cells
/// Summary plus `rows`, row 0 at im_min; boundary cells are -1.
Json encode_grid(const IndexMap& map);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);
/// Fields joined by commas, terminated by CRLF.
void write_csv_row(std::ostream& os, const std::vector<std::string>& fields);
/// %.17g
std::string csv_number(double x);

/// Writes `content` to dir/name, creating dir. Returns the path.
std::string write_file(const std::string& dir, const std::string& name, const std::string& content);

}  // namespace bundle_lab::cli
