#ifndef ERGOLAB_REPORT_HPP
#define ERGOLAB_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "ergolab/measure.hpp"

// CSV and polyline-SVG output. Numbers are printed with %.17g so a rerun of
// the same scenario reproduces every artifact byte for byte.

namespace ergolab {

class CsvWriter {
public:
  // Throws std::runtime_error if the file cannot be opened.
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::vector<std::string>& preamble = {});
  ~CsvWriter();

  CsvWriter& field(const std::string& v);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(bool v);
  void end_row();

private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);

// Minimalist vector plot: one polyline over the given points, linear axes
// fitted to the data range with a thin frame. No external renderer involved.
// Preamble lines land in an XML comment so plots carry the seed too.
void write_polyline_svg(const std::string& path, const std::vector<std::pair<double, double>>& points,
                        const std::string& title,
                        const std::vector<std::string>& preamble = {});

// (cell, weight, re, im) rows.
void write_field_csv(const std::string& path, const Field& f,
                     const std::vector<std::string>& preamble = {});

} // namespace ergolab

#endif
