#include "opobs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace opobs::io {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidInput("csv: not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidInput("csv: trailing characters in '" + s + "'");
  return v;
}

Json with_schema(Json metadata) {
  if (metadata.is_null()) metadata = Json::object();
  metadata["schema"] = kSchemaVersion;
  return metadata;
}

int column_index(const CsvTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int require_column(const CsvTable& t, const std::string& name) {
  const int i = column_index(t, name);
  if (i < 0) throw InvalidInput("csv: missing column '" + name + "'");
  return i;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const CsvTable& table) {
  out << "# " << with_schema(table.metadata).dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw InvalidInput("csv: missing '# {...}' metadata line");
  }
  try {
    t.metadata = Json::parse(line.substr(2));
  } catch (const Json::exception& e) {
    throw InvalidInput(std::string("csv: bad metadata: ") + e.what());
  }
  if (!t.metadata.contains("schema") || t.metadata["schema"] != kSchemaVersion) {
    throw InvalidInput("csv: unsupported schema");
  }
  if (!std::getline(in, line)) throw InvalidInput("csv: missing header row");
  t.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) throw InvalidInput("csv: ragged row");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw InvalidInput("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CsvTable matrix_table(const ComplexMatrix& m, Json metadata) {
  CsvTable t;
  t.metadata = with_schema(std::move(metadata));
  t.metadata["dim"] = m.rows();
  t.columns = {"row", "col", "re", "im"};
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      t.rows.push_back({static_cast<double>(r), static_cast<double>(c), m(r, c).real(),
                        m(r, c).imag()});
    }
  }
  return t;
}

ComplexMatrix matrix_from_table(const CsvTable& t) {
  const int ir = require_column(t, "row");
  const int ic = require_column(t, "col");
  const int re = require_column(t, "re");
  const int im = require_column(t, "im");
  Eigen::Index dim = 0;
  if (t.metadata.contains("dim")) {
    dim = t.metadata["dim"].get<Eigen::Index>();
  } else {
    for (const auto& row : t.rows) dim = std::max<Eigen::Index>(dim, static_cast<Eigen::Index>(row[ir]) + 1);
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const auto& row : t.rows) {
    const auto r = static_cast<Eigen::Index>(row[ir]);
    const auto c = static_cast<Eigen::Index>(row[ic]);
    if (r < 0 || c < 0 || r >= dim || c >= dim) throw InvalidInput("csv: matrix index out of range");
    m(r, c) = Complex(row[re], row[im]);
  }
  return m;
}

Json matrix_json(const ComplexMatrix& m, Json metadata) {
  Json j = with_schema(std::move(metadata));
  j["dim"] = m.rows();
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  }
  j["entries"] = std::move(entries);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.contains("schema") || j["schema"] != kSchemaVersion) {
    throw InvalidInput("json: unsupported schema");
  }
  const auto dim = j.at("dim").get<Eigen::Index>();
  const auto& entries = j.at("entries");
  if (static_cast<Eigen::Index>(entries.size()) != dim * dim) {
    throw InvalidInput("json: entry count does not match dim");
  }
  ComplexMatrix m(dim, dim);
  for (Eigen::Index k = 0; k < dim * dim; ++k) {
    m(k / dim, k % dim) = Complex(entries[k].at(0).get<double>(), entries[k].at(1).get<double>());
  }
  return m;
}

CsvTable grid_table(const optics::PhaseGrid& grid, Json metadata) {
  CsvTable t;
  t.metadata = with_schema(std::move(metadata));
  t.metadata["route"] = grid.route;
  t.metadata["n_intensity"] = grid.intensities.size();
  t.metadata["n_theta"] = grid.thetas.size();
  t.metadata["real_valued"] = grid.real_valued;
  t.metadata["max_imag"] = grid.max_imag;
  if (grid.n_max > 0) t.metadata["n_max"] = grid.n_max;
  if (grid.angular_nodes > 0) {
    t.metadata["angular_nodes"] = grid.angular_nodes;
    t.metadata["convergence_delta"] = grid.convergence_delta;
  }
  t.columns = {"I", "theta", "re"};
  if (!grid.real_valued) t.columns.push_back("im");
  for (std::size_t j = 0; j < grid.intensities.size(); ++j) {
    for (std::size_t k = 0; k < grid.thetas.size(); ++k) {
      const Complex v = grid.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
      std::vector<double> row{grid.intensities[j], grid.thetas[k], v.real()};
      if (!grid.real_valued) row.push_back(v.imag());
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

optics::PhaseGrid grid_from_table(const CsvTable& t) {
  const int ii = require_column(t, "I");
  const int it = require_column(t, "theta");
  const int re = require_column(t, "re");
  const int im = column_index(t, "im");
  optics::PhaseGrid grid;
  for (const auto& row : t.rows) {
    if (grid.intensities.empty() || row[ii] != grid.intensities.back()) {
      grid.intensities.push_back(row[ii]);
    }
    if (grid.intensities.size() == 1) grid.thetas.push_back(row[it]);
  }
  const auto n_i = static_cast<Eigen::Index>(grid.intensities.size());
  const auto n_t = static_cast<Eigen::Index>(grid.thetas.size());
  if (n_i * n_t != static_cast<Eigen::Index>(t.rows.size())) {
    throw InvalidInput("csv: grid rows do not form an I x theta product");
  }
  grid.values.resize(n_i, n_t);
  for (Eigen::Index k = 0; k < n_i * n_t; ++k) {
    const auto& row = t.rows[static_cast<std::size_t>(k)];
    grid.values(k / n_t, k % n_t) = Complex(row[re], im >= 0 ? row[im] : 0.0);
  }
  grid.real_valued = im < 0;
  grid.route = t.metadata.value("route", std::string());
  grid.max_imag = t.metadata.value("max_imag", 0.0);
  grid.n_max = t.metadata.value("n_max", 0);
  grid.angular_nodes = t.metadata.value("angular_nodes", 0);
  grid.convergence_delta = t.metadata.value("convergence_delta", 0.0);
  return grid;
}

CsvTable propensity_table(const optics::PropensityTable& table, Json metadata) {
  CsvTable t;
  t.metadata = with_schema(std::move(metadata));
  t.metadata["normalization"] = table.normalization;
  t.metadata["radial_nodes"] = table.radial_nodes;
  t.metadata["r_max"] = table.r_max;
  t.metadata["convergence_delta"] = table.convergence_delta;
  t.metadata["tail_ratio"] = table.tail_ratio;
  t.columns = {"phi", "pr"};
  for (std::size_t k = 0; k < table.angles.size(); ++k) {
    t.rows.push_back({table.angles[k], table.densities[k]});
  }
  return t;
}

CsvTable batch_table(const sampler::SampleBatch& batch, Json metadata) {
  CsvTable t;
  t.metadata = with_schema(std::move(metadata));
  t.metadata["source"] = batch.source;
  t.metadata["seed"] = batch.seed;
  t.metadata["count"] = batch.count;
  if (batch.kind == sampler::BatchKind::Spin) {
    t.metadata["proposals"] = batch.proposals;
    t.metadata["acceptance_rate"] = batch.acceptance_rate;
    t.metadata["analytic_acceptance"] = batch.analytic_acceptance;
    t.columns = {"theta", "phi"};
    for (const auto& d : batch.directions) t.rows.push_back({d.theta(), d.phi()});
  } else {
    t.metadata["table_nodes"] = batch.table_nodes;
    t.columns = {"phi"};
    for (double p : batch.phases) t.rows.push_back({p});
  }
  return t;
}

Json moments_json(const std::vector<sampler::MomentEstimate>& estimates, Json metadata) {
  Json j = with_schema(std::move(metadata));
  Json records = Json::array();
  for (const auto& e : estimates) {
    records.push_back({{"order", e.order},
                       {"kind", sampler::to_string(e.kind)},
                       {"axis", e.axis},
                       {"re", e.estimate.real()},
                       {"im", e.estimate.imag()},
                       {"stderr", e.standard_error},
                       {"count", e.count},
                       {"seed", e.seed}});
  }
  j["moments"] = std::move(records);
  return j;
}

Json error_record(const std::string& type, const std::string& message, int exit_code) {
  return {{"schema", kSchemaVersion},
          {"error", {{"type", type}, {"message", message}, {"exit_code", exit_code}}}};
}

}  // namespace opobs::io
