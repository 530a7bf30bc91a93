#pragma once

// JSON documents for decorated dual graphs, slb presentations and analysis
// reports. Serialization is canonical: vertices, edges, markings and object
// keys are sorted, so serialize(parse(doc)) reproduces canonical documents
// byte for byte.

#include <optional>
#include <string>

#include <json.hpp>

#include "logmonoid/logcurve.hpp"
#include "logmonoid/slb.hpp"

namespace logmonoid::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1.0";

/// Malformed input. `where` is a JSON pointer to the offending field, or
/// "line L, column C" for syntax errors.
class InputError : public PreconditionError {
public:
    InputError(const std::string& where, const std::string& what)
        : PreconditionError(where + ": " + what), where_(where), message_(what) {}
    const std::string& where() const { return where_; }
    const std::string& message() const { return message_; }

private:
    std::string where_;
    std::string message_;
};

/// Parses text, reporting syntax errors with line and column.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

/// Metadata values are kept as compact JSON text.
DecoratedDualGraph graph_from_json(const Json& doc, bool strict_contact = false);
Json graph_to_json(const DecoratedDualGraph& g);
/// dump(2) of the canonical document plus a trailing newline.
std::string serialize_graph(const DecoratedDualGraph& g);

/// {"mag": "p/q", "root": n, "phase": "a/b"}; root and phase are optional.
ExactUnit unit_from_json(const Json& j, const std::string& where = "");
Json unit_to_json(const ExactUnit& u);
/// null or 0 for the zero section, otherwise a unit.
ExactScalar scalar_from_json(const Json& j, const std::string& where = "");
Json scalar_to_json(const ExactScalar& s);

/// Either {"presentation": "<text>", "sections": [...], "relation_units": [...]}
/// or {"graph": {...}, "relation_units": [...], "section_units": [...]} for the
/// slb of a log map; relation and section units default to 1 and to the
/// inverse relation units.
struct SlbDocument {
    SlbPointPresentation slb;
    std::optional<BasicMonoid> basic;  // set for the graph form
};

SlbDocument slb_from_json(const Json& doc);
Json slb_to_json(const SlbPointPresentation& p);

struct AnalysisOptions {
    bool strict_contact = false;
    std::size_t bound = 0;  // 0: default_membership_bound()
};

/// Every pipeline stage on one graph.
Json analyze_graph(const DecoratedDualGraph& g, const AnalysisOptions& opts = {});
/// Consistency verdict, witness or certificate, realized sections and, for
/// the graph form, the symplectic check and saturation data.
Json check_slb(const SlbDocument& doc, std::size_t bound = 0);

/// snf, gp, sharp, saturate, dual or ddual of one presentation. Throws
/// PreconditionError for an unknown subcommand.
Json monoid_command(const std::string& sub, const MonoidPresentation& p);
std::string render_monoid(const std::string& sub, const Json& result);

/// Human-readable rendering of analyze_graph output.
std::string render_report(const Json& report);

Json int_vector_to_json(const IntVector& v);
Json vectors_to_json(const std::vector<IntVector>& vs);

}  // namespace logmonoid::io
