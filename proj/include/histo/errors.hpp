#ifndef HISTO_ERRORS_HPP_
#define HISTO_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace histo {

struct NegativeCount : std::runtime_error {
    explicit NegativeCount(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainViolation : std::runtime_error {
    explicit DomainViolation(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyStream : std::runtime_error {
    explicit EmptyStream(const std::string& msg) : std::runtime_error(msg) {}
};

struct BadParams : std::runtime_error {
    explicit BadParams(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainMismatch : std::runtime_error {
    explicit DomainMismatch(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidHHHSet : std::runtime_error {
    explicit InvalidHHHSet(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonReplayableSource : std::runtime_error {
    explicit NonReplayableSource(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyPointSet : std::runtime_error {
    explicit EmptyPointSet(const std::string& msg) : std::runtime_error(msg) {}
};

struct NegativeDeltaUnsupported : std::runtime_error {
    explicit NegativeDeltaUnsupported(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace histo

#endif  // HISTO_ERRORS_HPP_
