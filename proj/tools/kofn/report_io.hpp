#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kofn/rational.hpp"
#include "kofn/stats.hpp"

namespace kofn::cli {

using nlohmann::json;

// Exact values travel as {"num": "...", "den": "..."} strings.
json rational_json(const Rational& r);
Rational rational_from_json(const json& j);
// "3/8", "0.25" or "1" -> exact rational. Throws DomainError.
Rational parse_rational(std::string_view text);

json estimate_json(const Estimate& e);

// Shortest round-trip-safe text for a double ("inf" / "nan" spelled out).
std::string format_double(double x);

// RFC 4180 quoting where needed; rows are written on the fly.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(const std::string& s);
    Row& operator<<(const char* s) { return *this << std::string(s); }
    Row& operator<<(double x) { return *this << format_double(x); }
    Row& operator<<(std::uint64_t x) { return *this << std::to_string(x); }
    Row& operator<<(std::int64_t x) { return *this << std::to_string(x); }
    Row& operator<<(int x) { return *this << std::to_string(x); }
    Row& operator<<(unsigned x) { return *this << std::to_string(x); }
    Row& operator<<(bool b) { return *this << std::string(b ? "1" : "0"); }
    Row& operator<<(const Rational& r) { return *this << r.get_str(); }
    ~Row() noexcept(false);

   private:
    friend class CsvTable;
    explicit Row(CsvTable& table) : table_(table) {}
    CsvTable& table_;
    std::vector<std::string> cells_;
  };

  Row row() { return Row(*this); }
  std::size_t rows() const { return rows_; }
  const std::string& text() const { return text_; }

 private:
  void append(const std::vector<std::string>& cells);
  std::size_t columns_;
  std::size_t rows_ = 0;
  std::string text_;
};

// FNV-1a 64-bit, hex; identifies data files in manifests.
std::string content_digest(std::string_view bytes);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace kofn::cli
