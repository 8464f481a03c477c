#include "ergolab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ergolab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvWriter::Impl {
  std::ofstream out;
  std::size_t columns = 0;
  std::size_t in_row = 0;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::string>& preamble)
    : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open for writing: " + path);
  }
  for (const std::string& line : preamble) impl_->out << "# " << line << "\n";
  impl_->columns = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i)
    impl_->out << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

CsvWriter& CsvWriter::field(const std::string& v) {
  impl_->out << (impl_->in_row ? "," : "") << v;
  ++impl_->in_row;
  return *this;
}

CsvWriter& CsvWriter::field(double v) { return field(format_double(v)); }
CsvWriter& CsvWriter::field(long long v) { return field(std::to_string(v)); }
CsvWriter& CsvWriter::field(bool v) { return field(std::string(v ? "1" : "0")); }

void CsvWriter::end_row() {
  if (impl_->in_row != impl_->columns)
    throw std::logic_error("csv row has wrong number of fields");
  impl_->out << "\n";
  impl_->in_row = 0;
}

void write_polyline_svg(const std::string& path,
                        const std::vector<std::pair<double, double>>& points,
                        const std::string& title, const std::vector<std::string>& preamble) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const std::string& line : preamble) out << "<!-- " << line << " -->\n";

  const double w = 640, h = 400, pad = 48;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!points.empty()) {
    xmin = xmax = points[0].first;
    ymin = ymax = points[0].second;
    for (const auto& [x, y] : points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto sx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (w - 2 * pad); };
  auto sy = [&](double y) { return h - pad - (y - ymin) / (ymax - ymin) * (h - 2 * pad); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  out << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << w - 2 * pad << "\" height=\""
      << h - 2 * pad << "\" fill=\"none\" stroke=\"#888\"/>\n";
  out << "<text x=\"" << pad << "\" y=\"" << pad - 12 << "\" font-size=\"14\">" << title
      << "</text>\n";
  out << "<text x=\"" << pad << "\" y=\"" << h - 8 << "\" font-size=\"10\">x: ["
      << format_double(xmin) << ", " << format_double(xmax) << "]  y: [" << format_double(ymin)
      << ", " << format_double(ymax) << "]</text>\n";
  out << "<polyline fill=\"none\" stroke=\"#06c\" stroke-width=\"1.5\" points=\"";
  for (const auto& [x, y] : points) out << format_double(sx(x)) << "," << format_double(sy(y)) << " ";
  out << "\"/>\n</svg>\n";
}

void write_field_csv(const std::string& path, const Field& f,
                     const std::vector<std::string>& preamble) {
  CsvWriter csv(path, {"cell", "weight", "re", "im"}, preamble);
  for (std::size_t i = 0; i < f.size(); ++i) {
    csv.field(static_cast<long long>(f.space().cells()[i]))
        .field(f.space().weight(i))
        .field(f[i].real())
        .field(f[i].imag());
    csv.end_row();
  }
}

} // namespace ergolab
