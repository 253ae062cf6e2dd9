#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "slicewalk/counting.hpp"
#include "slicewalk/experiments.hpp"
#include "slicewalk/graph_gen.hpp"
#include "slicewalk/spectra.hpp"
#include "slicewalk/verify.hpp"
#include "slicewalk/walks.hpp"

namespace slicewalk {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

// Insertion-ordered, so the serialized key order is fixed.
using Json = nlohmann::ordered_json;

enum class ReportFormat { json, csv };
ReportFormat report_format_from_string(const std::string& s);

// {tool, version, schema_version, command, seed, config}
Json reproducibility_stanza(const std::string& command, std::uint64_t seed, const Json& config);

Json to_json(const GenStats& s);
Json to_json(const CommonNeighborStats& s);
Json to_json(const SpectrumSummary& s);
Json to_json(const GapInfo& g);
Json to_json(const MixingReport& m);
Json to_json(const PsdResult& p);
Json to_json(const LinkRecord& r);
Json to_json(const VerificationReport& r);
Json to_json(const TraceEntry& t);
Json to_json(const CountEstimate& e);
Json to_json(const ThresholdParams& t);
Json to_json(const BandTerm& b);
Json to_json(const PartitionHatEstimate& e);
Json to_json(const ExperimentConfig& c);
Json to_json(const Frequency& f);
Json to_json(const SizeProbe& p);
Json to_json(const ConcentrationReport& r);
Json to_json(const LargeSetReport& r);
Json to_json(const SetSizeReport& r);
Json to_json(const SlowMixingReport& r);
Json to_json(const RamanujanReport& r);
Json to_json(const CommonNeighborReport& r);

// Document layout: {"reproducibility": ..., "<key>": result}.
// CSV: stanza as "# key=value" lines, then one row per element of
// result[records] (flattened with dotted keys), or a single row of the
// flattened result when records is empty or absent.
void write_report(std::ostream& out, const Json& doc, ReportFormat format, const std::string& records = "");

// Dotted-key flattening of nested objects; arrays of scalars are joined with ';'.
Json flatten(const Json& j);

}  // namespace slicewalk
