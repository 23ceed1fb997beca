#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "glassmix/bottleneck.hpp"
#include "glassmix/exact.hpp"
#include "glassmix/model.hpp"

namespace glassmix::io {

using nlohmann::json;

inline constexpr std::string_view kSchema = "v1";

/// {"schema","n","p","seed","repr"[,"couplings"]}. Couplings are
/// written only when asked for; without them the instance is regenerated
/// from the seed on load.
json instance_to_json(const DisorderInstance& inst, bool include_couplings = false);
DisorderInstance instance_from_json(const json& j);

/// Little-endian: u64 N, then 2^N doubles.
void write_energy_table(const std::filesystem::path& path, std::span<const double> table, int n);
std::vector<double> read_energy_table(const std::filesystem::path& path, int* n_out = nullptr);

/// Shortest decimal form that reads back to the same double.
std::string format_double(double v);

/// RFC-4180 writer: mandatory header, CRLF line ends, quoting when needed.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double v);
  CsvWriter& field(std::int64_t v);
  CsvWriter& field(std::uint64_t v);
  CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
  CsvWriter& field(bool v) { return field(std::string_view(v ? "true" : "false")); }
  void end_row();

  std::size_t rows() const { return rows_; }

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t column_ = 0;
  std::size_t rows_ = 0;
};

/// Splits RFC-4180 text into rows of unquoted fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

std::string_view to_string(MixingKind kind);

json chain_terms_to_json(const ChainTerms& chain);
json certificate_to_json(const BoundCertificate& cert);

/// Writes `text` to `path` through a temporary file and rename.
void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace glassmix::io
