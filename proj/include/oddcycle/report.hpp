#pragma once

#include <ostream>
#include <vector>

#include <json.hpp>

#include "oddcycle/blowup.hpp"
#include "oddcycle/counting.hpp"
#include "oddcycle/extremal.hpp"
#include "oddcycle/graph.hpp"
#include "oddcycle/regularize.hpp"
#include "oddcycle/spectral.hpp"

// JSON conversions for every report type. Objects use nlohmann::json's
// default std::map storage, so keys come out sorted and dumps of equal values
// are byte-identical.
namespace oddcycle {

using Json = nlohmann::json;

// Plain number when the value fits in 64 bits, decimal string otherwise.
Json count_json(const BigCount& value);

void to_json(Json& j, const VertexSet& s);
void to_json(Json& j, const SpectralProfile& s);
void to_json(Json& j, const JumblednessParams& s);
void to_json(Json& j, const JumblednessReport& s);
void to_json(Json& j, const CleanupParams& s);
void to_json(Json& j, const CleanupOutcome& s);
void to_json(Json& j, const DegreeWindow& s);
void to_json(Json& j, const WindowAudit& s);
void to_json(Json& j, const BlowupGraph& s);
void to_json(Json& j, const ExtractionParams& s);
void to_json(Json& j, const ExtractionResult& s);
void to_json(Json& j, const PqSums& s);
void to_json(Json& j, const VertexCount& s);
void to_json(Json& j, const SaturationSummary& s);
void to_json(Json& j, const CountReport& s);
void to_json(Json& j, const EdgeLoad& s);
void to_json(Json& j, const RenamedSaturation& s);
void to_json(Json& j, const SaturationResult& s);
void to_json(Json& j, const TupleAudit& s);
void to_json(Json& j, const ErrorTermAudit& s);
void to_json(Json& j, const CycleList& s);
void to_json(Json& j, const MaxCut& s);
void to_json(Json& j, const TheoremParams& s);
void to_json(Json& j, const InequalityCheck& s);
void to_json(Json& j, const CycleCountAudit& s);
void to_json(Json& j, const ExtractionSummary& s);
void to_json(Json& j, const ExtremalReport& s);

// Reads the object written for a BlowupGraph (or any object holding one
// under "blowup"). Throws ParseError on missing or malformed fields and
// ParameterError when the layer structure is invalid.
BlowupGraph blowup_from_json(const Json& j);

// u,v,load,saturated with a header line.
void write_loads_csv(const SaturationResult& s, std::ostream& out);

// strategy,n,k,density_ratio,precondition_met,cycle_found,method,stage,
// min_slack,f_meets_h with a header line. min_slack is the smallest audit
// slack, empty when no audit ran.
void write_extremal_csv(const std::vector<ExtremalReport>& reports, std::ostream& out);

}  // namespace oddcycle
