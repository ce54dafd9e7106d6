#pragma once

#include <stdexcept>
#include <string>

namespace scb {

// Error taxonomy. Exit-code mapping for the CLI:
//   2 = input error, 3 = numeric precondition failure, 4 = internal invariant.
enum class errc {
    not_a_kernel,
    empty_data,
    empty_window,
    singular_fit,
    density_too_small,
    bandwidth_too_large,
    domain_error,
    invalid_reps,
    diverged,
    file_not_found,
    column_not_found,
    all_rows_invalid,
    series_too_short,
    io_error,
    negative_variance_center,
    internal,
};

constexpr const char* errc_name(errc c) {
    switch (c) {
        case errc::not_a_kernel: return "NotAKernel";
        case errc::empty_data: return "EmptyData";
        case errc::empty_window: return "EmptyWindow";
        case errc::singular_fit: return "SingularFit";
        case errc::density_too_small: return "DensityTooSmall";
        case errc::bandwidth_too_large: return "BandwidthTooLarge";
        case errc::domain_error: return "DomainError";
        case errc::invalid_reps: return "InvalidReps";
        case errc::diverged: return "Diverged";
        case errc::file_not_found: return "FileNotFound";
        case errc::column_not_found: return "ColumnNotFound";
        case errc::all_rows_invalid: return "AllRowsInvalid";
        case errc::series_too_short: return "SeriesTooShort";
        case errc::io_error: return "IoError";
        case errc::negative_variance_center: return "NegativeVarianceCenter";
        case errc::internal: return "Internal";
    }
    return "Unknown";
}

constexpr int exit_code_for(errc c) {
    switch (c) {
        case errc::not_a_kernel:
        case errc::empty_data:
        case errc::invalid_reps:
        case errc::file_not_found:
        case errc::column_not_found:
        case errc::all_rows_invalid:
        case errc::series_too_short:
        case errc::io_error:
            return 2;
        case errc::empty_window:
        case errc::singular_fit:
        case errc::density_too_small:
        case errc::bandwidth_too_large:
        case errc::domain_error:
        case errc::diverged:
        case errc::negative_variance_center:
            return 3;
        case errc::internal:
            return 4;
    }
    return 4;
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }
    int exit_code() const { return exit_code_for(code_); }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace scb
