#include "ephx/csv.hpp"

#include "ephx/errors.hpp"

namespace ephx {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path) {
  f_ = std::fopen(path.c_str(), "w");
  if (!f_) throw Error("cannot open " + path + " for writing");
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::comment(const std::string& text) { std::fprintf(f_, "# %s\n", text.c_str()); }

void CsvWriter::header(std::initializer_list<std::string> cols) { header(std::vector<std::string>(cols)); }

void CsvWriter::header(const std::vector<std::string>& cols) {
  bool first = true;
  for (const auto& c : cols) put(c, first);
  std::fputc('\n', f_);
}

void CsvWriter::row_values(const std::vector<double>& vals) {
  bool first = true;
  for (double v : vals) put(v, first);
  std::fputc('\n', f_);
}

void CsvWriter::put(double v, bool& first) {
  sep(first);
  std::fputs(format_double(v).c_str(), f_);
}
void CsvWriter::put(int v, bool& first) {
  sep(first);
  std::fprintf(f_, "%d", v);
}
void CsvWriter::put(long v, bool& first) {
  sep(first);
  std::fprintf(f_, "%ld", v);
}
void CsvWriter::put(long long v, bool& first) {
  sep(first);
  std::fprintf(f_, "%lld", v);
}
void CsvWriter::put(std::size_t v, bool& first) {
  sep(first);
  std::fprintf(f_, "%zu", v);
}
void CsvWriter::put(const std::string& v, bool& first) {
  sep(first);
  std::fputs(v.c_str(), f_);
}

}  // namespace ephx
