#include "glassmix/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace glassmix::io {

namespace {

void write_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), 8);
}

std::uint64_t read_u64_le(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), 8);
  require(in.gcount() == 8, ErrorKind::Io, "truncated energy table");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{bytes[i]} << (8 * i);
  return v;
}

}  // namespace

json instance_to_json(const DisorderInstance& inst, bool include_couplings) {
  json j{{"schema", kSchema},
         {"n", inst.n()},
         {"p", inst.p()},
         {"seed", inst.seed()},
         {"repr", to_string(inst.representation())}};
  if (include_couplings) j["couplings"] = std::vector<double>(inst.couplings().begin(), inst.couplings().end());
  return j;
}

DisorderInstance instance_from_json(const json& j) {
  try {
    require(j.value("schema", std::string(kSchema)) == kSchema, ErrorKind::InvalidParams, "unsupported schema");
    ModelParams params;
    params.n = j.at("n").get<int>();
    params.p = j.at("p").get<int>();
    params.validate();
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto repr = j.contains("repr") ? representation_from_string(j.at("repr").get<std::string>())
                                         : default_representation(params.n, params.p);
    if (j.contains("couplings"))
      return DisorderInstance::from_couplings(params, repr, j.at("couplings").get<std::vector<double>>(), seed);
    return DisorderInstance::sample(params, seed, repr);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidParams, std::string("instance file: ") + e.what());
  }
}

void write_energy_table(const std::filesystem::path& path, std::span<const double> table, int n) {
  require(n >= 0 && n < 63 && table.size() == (std::size_t{1} << n), ErrorKind::DimensionMismatch,
          "energy table size is not 2^N");
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string());
  write_u64_le(out, static_cast<std::uint64_t>(n));
  for (double v : table) write_u64_le(out, std::bit_cast<std::uint64_t>(v));
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

std::vector<double> read_energy_table(const std::filesystem::path& path, int* n_out) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  const std::uint64_t n = read_u64_le(in);
  require(n <= kMaxTableSpins, ErrorKind::CapacityExceeded, "energy table header N too large");
  std::vector<double> table(std::size_t{1} << n);
  for (double& v : table) v = std::bit_cast<double>(read_u64_le(in));
  if (n_out != nullptr) *n_out = static_cast<int>(n);
  return table;
}

std::string format_double(double v) {
  std::array<char, 40> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  require(columns_ > 0, ErrorKind::InvalidParams, "CSV header is empty");
  for (const auto& h : header) field(h);
  end_row();
  rows_ = 0;
}

void CsvWriter::separator() {
  require(column_ < columns_, ErrorKind::DimensionMismatch, "CSV row has too many fields");
  if (column_ > 0) out_ << ',';
  ++column_;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    out_ << text;
    return *this;
  }
  out_ << '"';
  for (char c : text) {
    if (c == '"') out_ << '"';
    out_ << c;
  }
  out_ << '"';
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(std::string_view(format_double(v))); }

CsvWriter& CsvWriter::field(std::int64_t v) { return field(std::string_view(std::to_string(v))); }

CsvWriter& CsvWriter::field(std::uint64_t v) { return field(std::string_view(std::to_string(v))); }

void CsvWriter::end_row() {
  require(column_ == columns_, ErrorKind::DimensionMismatch, "CSV row has too few fields");
  out_ << "\r\n";
  column_ = 0;
  ++rows_;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      cell += c;
    }
  }
  require(!quoted, ErrorKind::Io, "unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string_view to_string(MixingKind kind) {
  return kind == MixingKind::Exact ? "exact" : "capped_lower_bound";
}

json chain_terms_to_json(const ChainTerms& chain) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"exact_ratio", num(chain.exact_ratio)},
          {"surface_fraction", num(chain.surface_fraction)},
          {"log_energy_bound", num(chain.log_energy_bound)},
          {"log_entropy_bound", num(chain.log_entropy_bound)},
          {"energy_bound", num(chain.energy_bound)},
          {"entropy_bound", num(chain.entropy_bound)},
          {"min_surface_energy", num(chain.min_surface_energy)},
          {"min_surface_g", num(chain.min_surface_g)}};
}

json certificate_to_json(const BoundCertificate& cert) {
  json flags = json::array();
  flags.push_back({{"name", "ratio_le_fraction"}, {"holds", cert.chain.ratio_le_fraction}});
  flags.push_back({{"name", "fraction_le_energy"}, {"holds", cert.chain.fraction_le_energy}});
  flags.push_back({{"name", "energy_le_entropy"}, {"holds", cert.chain.energy_le_entropy}});
  return {{"schema", kSchema},
          {"center", cert.center},
          {"k", cert.k},
          {"ratio", cert.ratio},
          {"tmix_lower", cert.tmix_lower},
          {"pi_ball", cert.pi_ball},
          {"chain_terms", chain_terms_to_json(cert.chain)},
          {"flags", flags}};
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace glassmix::io
