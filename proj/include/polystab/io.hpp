#ifndef POLYSTAB_IO_HPP
#define POLYSTAB_IO_HPP

#include "polystab/constructions.hpp"
#include "polystab/monotone.hpp"
#include "polystab/shooting.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>

namespace polystab {

using Json = nlohmann::ordered_json;

namespace io {

/// Deterministic shortest-roundtrip rendering used by every CSV writer.
std::string fmt(double x);

std::uint64_t fnv1a(const std::string& data);
std::string hex64(std::uint64_t v);

std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& body);
void write_json_file(const std::filesystem::path& p, const Json& doc);

/// Minimal JSON-schema subset: type, properties, required, items, enum.
bool validate_schema(const Json& schema, const Json& doc, std::string* err = nullptr);

} // namespace io

Json to_json(const Evidence& ev);
Json to_json(const Certificate& c);
Json to_json(const Bracket& b);
Json to_json(const CertificateThreshold& t);
Json to_json(const FormWitness& w);
Json to_json(const StabilityVerdict& v);
Json to_json(const OddTailRecipe& r);
Json to_json(const EvenTailRecipe& r);
Json to_json(const ThresholdScan& s);
Json to_json(const IteratedBoundsReport& r);
Json to_json(const ComparisonReport& r);

Json profile_metadata(const RadialProfile& p, const IntegratorConfig& cfg);
Json iterate_metadata(const SystemIterate& it, const AdmissibleConstants& consts);

void write_witness_csv(std::ostream& os, const FormWitness& w);

} // namespace polystab

#endif
