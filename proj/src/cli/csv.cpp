#include "trickle/cli/csv.hpp"

#include <stdexcept>

#ifndef TRICKLE_VERSION
#define TRICKLE_VERSION "0.1.0-unknown"
#endif

namespace trickle::cli {

std::string version_string() { return TRICKLE_VERSION; }

std::string comment_line(const ExperimentSpec& spec) {
    return "# trickle " + version_string() + " | " + spec.canonical();
}

CsvFile::CsvFile(const std::filesystem::path& path, const ExperimentSpec& spec,
                 std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out_ << comment_line(spec) << '\n';
    bool first = true;
    for (auto h : header) {
        if (!first) out_ << ',';
        first = false;
        out_ << h;
    }
    out_ << '\n';
}

void CsvFile::put_text(std::string_view text) {
    if (text.find_first_of(",\"\n") == std::string_view::npos) {
        out_ << text;
        return;
    }
    out_ << '"';
    for (char c : text) {
        if (c == '"') out_ << '"';
        out_ << c;
    }
    out_ << '"';
}

void CsvFile::close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
}

} // namespace trickle::cli
