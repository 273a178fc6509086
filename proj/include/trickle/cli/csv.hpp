#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>

#include "trickle/cli/experiment.hpp"
#include "trickle/numeric/format.hpp"

namespace trickle::cli {

std::string version_string();

// "# trickle <version> | <canonical spec>"
std::string comment_line(const ExperimentSpec& spec);

// Output file that starts with the spec comment line and a header row.
// Doubles are written with round-trip precision so reruns compare equal
// byte for byte.
class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const ExperimentSpec& spec,
            std::initializer_list<std::string_view> header);

    template <class... Fields>
    void row(const Fields&... fields) {
        bool first = true;
        ((put(fields, first)), ...);
        out_ << '\n';
    }

    const std::filesystem::path& path() const { return path_; }
    void close();  // throws std::runtime_error on I/O failure

private:
    template <class T>
    void put(const T& v, bool& first) {
        if (!first) out_ << ',';
        first = false;
        if constexpr (std::is_floating_point_v<T>) {
            out_ << numeric::format_real(v);
        } else if constexpr (std::is_convertible_v<const T&, std::string_view>) {
            put_text(v);
        } else {
            out_ << v;
        }
    }

    void put_text(std::string_view text);  // quotes when needed

    std::filesystem::path path_;
    std::ofstream out_;
};

} // namespace trickle::cli
