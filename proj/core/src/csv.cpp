#include <charconv>
#include <cmath>
#include <stdexcept>

#include "evwg/io.hpp"

namespace evwg {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
  return {buf, res.ptr};
}

CsvWriter::CsvWriter(std::initializer_list<std::string_view> header) : columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    if (!first) out_.push_back(',');
    out_.append(h);
    first = false;
  }
  out_.push_back('\n');
}

void CsvWriter::separator() {
  if (in_row_ >= columns_) throw std::logic_error("csv: too many fields in row");
  if (in_row_ > 0) out_.push_back(',');
  ++in_row_;
}

CsvWriter& CsvWriter::field(double v) {
  separator();
  out_ += format_double(v);
  return *this;
}

CsvWriter& CsvWriter::field(long long v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view v) {
  separator();
  out_.append(v);
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("csv: row has wrong number of fields");
  out_.push_back('\n');
  in_row_ = 0;
  ++rows_;
}

}  // namespace evwg
