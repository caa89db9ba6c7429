#include "oplog/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oplog/errors.hpp"

namespace oplog::io {

namespace {

constexpr const char* kVersion = "0.1.0";

void append_json_string(std::string& out, const std::string& s) {
    out += '"';
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

double finite_number(const nlohmann::json& v, const char* what) {
    if (!v.is_number()) throw ConfigError(std::string(what) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(std::string(what) + ": nonfinite value");
    return d;
}

}  // namespace

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string matrix_to_json(const ComplexMatrix& m) {
    std::string out = "{\"dim\": " + std::to_string(m.dim()) + ", \"entries\": [";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(m.data()[i].real());
        out += ", ";
        out += fmt17(m.data()[i].imag());
    }
    out += "]}\n";
    return out;
}

ComplexMatrix matrix_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("matrix file: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("matrix file: expected a JSON object");
    for (const auto& item : doc.items())
        if (item.key() != "dim" && item.key() != "entries")
            throw ConfigError("matrix file: unknown key '" + item.key() + "'");
    if (!doc.contains("dim") || !doc.contains("entries"))
        throw ConfigError("matrix file: needs 'dim' and 'entries'");
    if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::uint64_t>() == 0)
        throw ConfigError("matrix file: 'dim' must be a positive integer");
    const auto dim = doc["dim"].get<std::size_t>();
    const auto& entries = doc["entries"];
    if (!entries.is_array() || entries.size() != 2 * dim * dim)
        throw ConfigError("matrix file: 'entries' must hold 2*dim*dim reals");
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim * dim; ++i) {
        const double re = finite_number(entries[2 * i], "matrix entry");
        const double im = finite_number(entries[2 * i + 1], "matrix entry");
        m.data()[i] = {re, im};
    }
    return m;
}

void write_matrix(const std::string& path, const ComplexMatrix& m) {
    write_text_file(path, matrix_to_json(m));
}

ComplexMatrix read_matrix(const std::string& path) {
    return matrix_from_json_text(read_text_file(path));
}

std::string certificate_to_json(const KappaCertificate& cert) {
    std::string out = "{\"kappa\": [";
    out += fmt17(cert.kappa.real());
    out += ", ";
    out += fmt17(cert.kappa.imag());
    out += "], \"center\": [";
    out += fmt17(cert.contour.center.real());
    out += ", ";
    out += fmt17(cert.contour.center.imag());
    out += "], \"radius\": ";
    out += fmt17(cert.contour.radius);
    out += ", \"nodes\": " + std::to_string(cert.contour.nodes);
    out += ", \"spectral_margin\": ";
    out += fmt17(cert.spectral_margin);
    out += "}\n";
    return out;
}

void write_field_csv(const std::string& path, const SpaceTimeField& f) {
    std::string out = "x0,x1,re,im\n";
    const std::size_t n0 = f.axis0().n, n1 = f.axis1().n;
    out.reserve(out.size() + n0 * n1 * 64);
    for (std::size_t i = 0; i < n0; ++i) {
        const double x0 = f.axis0().point(i);
        for (std::size_t j = 0; j < n1; ++j) {
            out += fmt17(x0);
            out += ',';
            out += fmt17(f.axis1().point(j));
            out += ',';
            out += fmt17(f.at(i, j).real());
            out += ',';
            out += fmt17(f.at(i, j).imag());
            out += '\n';
        }
    }
    write_text_file(path, out);
}

void write_report_csv(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& rows) {
    std::string out = "name,value\n";
    for (const auto& [name, value] : rows) {
        out += name;
        out += ',';
        out += value;
        out += '\n';
    }
    write_text_file(path, out);
}

void write_svg_polyline(const std::string& path, const std::vector<double>& xs,
                        const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("svg polyline: coordinate lists differ in length");
    const double x_pad_lo = 60.0, x_pad_hi = 780.0;
    const double y_pad_lo = 560.0, y_pad_hi = 40.0;  // svg y grows downward
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (!xs.empty()) {
        xmin = xmax = xs[0];
        ymin = ymax = ys[0];
        for (std::size_t i = 1; i < xs.size(); ++i) {
            xmin = std::min(xmin, xs[i]);
            xmax = std::max(xmax, xs[i]);
            ymin = std::min(ymin, ys[i]);
            ymax = std::max(ymax, ys[i]);
        }
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const auto px = [&](double x) {
        return x_pad_lo + (x - xmin) / (xmax - xmin) * (x_pad_hi - x_pad_lo);
    };
    const auto py = [&](double y) {
        return y_pad_lo + (y - ymin) / (ymax - ymin) * (y_pad_hi - y_pad_lo);
    };
    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" "
        "width=\"800\" height=\"600\">\n"
        "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
        "<line x1=\"60\" y1=\"560\" x2=\"780\" y2=\"560\" stroke=\"black\"/>\n"
        "<line x1=\"60\" y1=\"40\" x2=\"60\" y2=\"560\" stroke=\"black\"/>\n";
    out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    char buf[64];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s%.6g,%.6g", i ? " " : "", px(xs[i]), py(ys[i]));
        out += buf;
    }
    out += "\"/>\n</svg>\n";
    write_text_file(path, out);
}

void ManifestBuilder::add_residual(const std::string& name, double value) {
    residuals.emplace_back(name, std::isfinite(value) ? fmt17(value) : std::string("null"));
}

std::string ManifestBuilder::to_json() const {
    std::string out = "{\n  \"version\": ";
    append_json_string(out, kVersion);
    out += ",\n  \"command\": ";
    append_json_string(out, command);
    out += ",\n  \"seed\": " + std::to_string(seed);
    out += ",\n  \"config\": " + config_echo;
    out += ",\n  \"files\": [";
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, files[i]);
    }
    out += "],\n  \"residuals\": {";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, residuals[i].first);
        out += ": ";
        out += residuals[i].second;
    }
    out += "},\n  \"timings_seconds\": {";
    for (std::size_t i = 0; i < timings.size(); ++i) {
        if (i) out += ", ";
        append_json_string(out, timings[i].first);
        out += ": ";
        out += fmt17(timings[i].second);
    }
    out += "}";
    if (!error.empty()) {
        out += ",\n  \"error\": ";
        append_json_string(out, error);
    }
    out += "\n}\n";
    return out;
}

void ManifestBuilder::write(const std::string& path) const {
    write_text_file(path, to_json());
}

}  // namespace oplog::io
