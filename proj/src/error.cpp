#include "patchq/error.hpp"

#include <sstream>

namespace patchq {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Lex: return "lex error";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Unsupported: return "unsupported construct";
    case ErrorKind::Elab: return "elaboration error";
    case ErrorKind::Eval: return "evaluation error";
    case ErrorKind::Config: return "config error";
    case ErrorKind::Limit: return "limit error";
    }
    return "error";
}

namespace {

std::string format_message(const std::string& message, SourcePos pos) {
    if (!pos.valid())
        return message;
    std::ostringstream os;
    os << pos.line << ":" << pos.column << ": " << message;
    return os.str();
}

std::string with_expected(std::string message, const std::vector<std::string>& expected) {
    if (expected.empty())
        return message;
    message += " (expected ";
    if (expected.size() > 1)
        message += "one of ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i)
            message += ", ";
        message += expected[i];
    }
    message += ")";
    return message;
}

} // namespace

Error::Error(ErrorKind kind, std::string message, SourcePos pos)
    : std::runtime_error(format_message(message, pos)), kind_(kind), pos_(pos),
      detail_(std::move(message)) {}

ParseError::ParseError(std::string message, SourcePos pos, std::vector<std::string> expected)
    : Error(ErrorKind::Parse, with_expected(std::move(message), expected), pos),
      expected_(std::move(expected)) {}

} // namespace patchq
