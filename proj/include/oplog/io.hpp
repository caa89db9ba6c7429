#ifndef OPLOG_IO_HPP
#define OPLOG_IO_HPP

// Artifact serialization: matrix JSON, certificate JSON, field and report
// CSV, the run manifest, and a minimal SVG polyline. All floating-point
// output uses 17 significant digits so files round-trip bit-exactly.

#include <string>
#include <utility>
#include <vector>

#include "oplog/complex_matrix.hpp"
#include "oplog/contour.hpp"
#include "oplog/swap.hpp"

namespace oplog::io {

std::string fmt17(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json_text(const std::string& text);
void write_matrix(const std::string& path, const ComplexMatrix& m);
ComplexMatrix read_matrix(const std::string& path);

std::string certificate_to_json(const KappaCertificate& cert);

void write_field_csv(const std::string& path, const SpaceTimeField& f);

// rows are written in the given order under a name,value header
void write_report_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& rows);

void write_svg_polyline(const std::string& path, const std::vector<double>& xs,
                        const std::vector<double>& ys);

// Collects everything a run produced; write() must be the run's final file
// operation so an existing manifest marks a complete run.
struct ManifestBuilder {
    std::string command;
    std::string config_echo = "null";  // raw JSON text
    std::uint64_t seed = 0;
    std::vector<std::string> files;
    std::vector<std::pair<std::string, std::string>> residuals;
    std::vector<std::pair<std::string, double>> timings;
    std::string error;  // error name when a numerical error ended the run

    void add_file(const std::string& name) { files.push_back(name); }
    // value is stored as a JSON number; nonfinite values map to null
    void add_residual(const std::string& name, double value);
    std::string to_json() const;
    void write(const std::string& path) const;
};

}  // namespace oplog::io

#endif
