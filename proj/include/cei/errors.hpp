#pragma once

#include <stdexcept>
#include <string>

namespace cei {

enum class errc {
    non_zero_start,
    non_finite,
    too_short,
    index_out_of_range,
    negative_endpoint,
    max_attempts_exceeded,
    empty_occupation,
    empty_local_time,
    no_passage,
    empty_sample,
    out_of_range,
    length_mismatch,
    too_few_samples,
    unnormalized,
    unknown_experiment,
    io_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::non_zero_start: return "non_zero_start";
        case errc::non_finite: return "non_finite";
        case errc::too_short: return "too_short";
        case errc::index_out_of_range: return "index_out_of_range";
        case errc::negative_endpoint: return "negative_endpoint";
        case errc::max_attempts_exceeded: return "max_attempts_exceeded";
        case errc::empty_occupation: return "empty_occupation";
        case errc::empty_local_time: return "empty_local_time";
        case errc::no_passage: return "no_passage";
        case errc::empty_sample: return "empty_sample";
        case errc::out_of_range: return "out_of_range";
        case errc::length_mismatch: return "length_mismatch";
        case errc::too_few_samples: return "too_few_samples";
        case errc::unnormalized: return "unnormalized";
        case errc::unknown_experiment: return "unknown_experiment";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

struct cei_error : std::runtime_error {
    errc code;
    cei_error(errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code(c) {}
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw cei_error(c, what); }

}  // namespace cei
