#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wavepot/errors.hpp"
#include "wavepot/io.hpp"

namespace wavepot {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void write_preamble(std::ostringstream& out, const char* kind, const std::string& hash,
                    bool partial) {
    out << "# wavepot " << kind << "\n";
    out << "# config_hash: " << hash << "\n";
    out << "# status: " << (partial ? "partial" : "complete") << "\n";
}

double parse_field(const std::string& token, std::size_t line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE)
        throw AnalysisError("trajectories line " + std::to_string(line) + ": bad number '" +
                            token + "'");
    return v;
}

}  // namespace

std::string trajectories_text(const Record& record, const std::string& hash, bool partial) {
    std::ostringstream out;
    write_preamble(out, "trajectories", hash, partial);
    out << kTrajectoryHeader << "\n";
    for (const Sample& s : record.samples) {
        const std::string t = format_double(s.t);
        for (std::size_t j = 0; j < record.rays(); ++j) {
            out << t << ',' << record.ray_id[j] << ',' << format_double(s.x[j]) << ','
                << format_double(s.z[j]) << ',' << format_double(s.px[j]) << ','
                << format_double(s.pz[j]) << ',' << format_double(s.R[j]) << ','
                << format_double(s.G[j]) << '\n';
        }
    }
    return out.str();
}

std::string intensity_text(const Record& record, const std::string& hash, bool partial) {
    std::ostringstream out;
    write_preamble(out, "intensity snapshots", hash, partial);
    out << "sample,t,mean_z,ray_id,x,intensity\n";
    for (std::size_t k = 0; k < record.samples.size(); ++k) {
        const Sample& s = record.samples[k];
        const std::string t = format_double(s.t), mz = format_double(s.mean_z());
        for (std::size_t j = 0; j < record.rays(); ++j)
            out << k << ',' << t << ',' << mz << ',' << record.ray_id[j] << ','
                << format_double(s.x[j]) << ',' << format_double(s.R[j] * s.R[j]) << '\n';
    }
    return out.str();
}

Record parse_trajectories(const std::string& text, double eps) {
    Record record;
    record.eps = eps;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kTrajectoryHeader)
                throw AnalysisError("trajectories line " + std::to_string(line_no) +
                                    ": expected header '" + kTrajectoryHeader + "'");
            header_seen = true;
            continue;
        }
        fields.clear();
        std::istringstream row(line);
        std::string token;
        while (std::getline(row, token, ',')) fields.push_back(token);
        if (fields.size() != 8)
            throw AnalysisError("trajectories line " + std::to_string(line_no) +
                                ": expected 8 columns");
        const double t = parse_field(fields[0], line_no);
        const double id = parse_field(fields[1], line_no);
        if (record.samples.empty() || record.samples.back().t != t) {
            if (!record.samples.empty() && record.samples.back().x.size() != record.rays())
                throw AnalysisError("trajectories line " + std::to_string(line_no) +
                                    ": sample has a different ray count");
            record.samples.push_back(Sample{t, {}, {}, {}, {}, {}, {}});
        }
        Sample& s = record.samples.back();
        const std::size_t j = s.x.size();
        if (record.samples.size() == 1) {
            record.ray_id.push_back(static_cast<std::size_t>(id));
        } else if (j >= record.rays() || record.ray_id[j] != static_cast<std::size_t>(id)) {
            throw AnalysisError("trajectories line " + std::to_string(line_no) +
                                ": ray order differs from the first sample");
        }
        s.x.push_back(parse_field(fields[2], line_no));
        s.z.push_back(parse_field(fields[3], line_no));
        s.px.push_back(parse_field(fields[4], line_no));
        s.pz.push_back(parse_field(fields[5], line_no));
        s.R.push_back(parse_field(fields[6], line_no));
        s.G.push_back(parse_field(fields[7], line_no));
        if (record.samples.size() == 1) record.x0.push_back(s.x.back());
    }
    if (!header_seen) throw AnalysisError("trajectories file has no header");
    if (record.samples.empty()) throw AnalysisError("trajectories file has no rows");
    if (record.samples.back().x.size() != record.rays())
        throw AnalysisError("trajectories file ends with an incomplete sample");
    return record;
}

Record read_trajectories(const std::filesystem::path& path, double eps) {
    return parse_trajectories(read_text_file(path), eps);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wavepot
