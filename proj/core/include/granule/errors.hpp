#ifndef GRANULE_ERRORS_HPP
#define GRANULE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace granule {

// Error categories. The CLI maps them onto exit statuses and the JSON
// diagnostics emitted on stderr; library users can switch on them.
enum class errc {
    parse,             // malformed input stream (ragged CSV rows, bad JSON)
    schema,            // structurally valid input with an invalid shape
    ordering,          // column cannot be totally ordered (mixed types)
    determinism,       // operation requires singleton valuations
    dimension,         // size mismatch between combined structures
    parameter,         // out-of-range or inconsistent argument
    domain,            // input outside the domain of a partial function
    capacity,          // enumeration would exceed the configured cap
    numeric,           // non-finite value where a finite one is required
    bounds,            // element index outside the universe
    degenerate_column, // constant column where variation is required
    discretization,    // interval family cannot fit the distinct values
    io,                // file system failure
    internal,          // broken invariant: a bug, not a user error
};

const char* errc_name(errc code);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

inline const char* errc_name(errc code) {
    switch (code) {
    case errc::parse: return "parse";
    case errc::schema: return "schema";
    case errc::ordering: return "ordering";
    case errc::determinism: return "determinism";
    case errc::dimension: return "dimension";
    case errc::parameter: return "parameter";
    case errc::domain: return "domain";
    case errc::capacity: return "capacity";
    case errc::numeric: return "numeric";
    case errc::bounds: return "bounds";
    case errc::degenerate_column: return "degenerate-column";
    case errc::discretization: return "discretization";
    case errc::io: return "io";
    case errc::internal: return "internal";
    }
    return "unknown";
}

} // namespace granule

#endif
