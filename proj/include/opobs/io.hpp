#pragma once

// CSV and JSON exchange formats. Every file carries `schema: 1`. CSV files
// start with one metadata line, `# ` followed by a JSON object, then a header
// row. Doubles are written with 17 significant digits so values round-trip.

#include "opobs/core.hpp"
#include "opobs/optics.hpp"
#include "opobs/sampler.hpp"
#include "opobs/wigner.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace opobs::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

std::string format_double(double x);

struct CsvTable {
  Json metadata = Json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
/// Throws InvalidInput on malformed input or a schema mismatch.
CsvTable read_csv(std::istream& in);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

/// Columns row,col,re,im.
CsvTable matrix_table(const ComplexMatrix& m, Json metadata = Json::object());
ComplexMatrix matrix_from_table(const CsvTable& table);

/// {schema, dim, entries: [[re, im], ...] row-major} merged with `metadata`.
Json matrix_json(const ComplexMatrix& m, Json metadata = Json::object());
ComplexMatrix matrix_from_json(const Json& j);

/// Columns I,theta,re[,im]; im is omitted for real-valued grids.
CsvTable grid_table(const optics::PhaseGrid& grid, Json metadata = Json::object());
optics::PhaseGrid grid_from_table(const CsvTable& table);

/// Columns phi,pr.
CsvTable propensity_table(const optics::PropensityTable& table, Json metadata = Json::object());

/// Columns theta,phi (spin) or phi (phase).
CsvTable batch_table(const sampler::SampleBatch& batch, Json metadata = Json::object());

/// One record per estimate: order, kind, axis, re, im, stderr, count, seed.
Json moments_json(const std::vector<sampler::MomentEstimate>& estimates,
                  Json metadata = Json::object());

/// Machine-readable error record.
Json error_record(const std::string& type, const std::string& message, int exit_code);

}  // namespace opobs::io
