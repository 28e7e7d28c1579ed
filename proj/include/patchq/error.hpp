#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace patchq {

/// 1-based source position. line == 0 means "no position".
struct SourcePos {
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    bool valid() const { return line != 0; }
    friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class ErrorKind {
    Lex,
    Parse,
    Unsupported,
    Elab,
    Eval,
    Config,
    Limit,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, SourcePos pos = {});

    ErrorKind kind() const { return kind_; }
    const SourcePos& pos() const { return pos_; }
    /// The message without position prefix.
    const std::string& detail() const { return detail_; }

private:
    ErrorKind kind_;
    SourcePos pos_;
    std::string detail_;
};

class LexError : public Error {
public:
    LexError(std::string message, SourcePos pos) : Error(ErrorKind::Lex, std::move(message), pos) {}
};

class ParseError : public Error {
public:
    ParseError(std::string message, SourcePos pos, std::vector<std::string> expected = {});
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::vector<std::string> expected_;
};

class UnsupportedConstruct : public Error {
public:
    UnsupportedConstruct(std::string message, SourcePos pos)
        : Error(ErrorKind::Unsupported, std::move(message), pos) {}
};

class ElabError : public Error {
public:
    explicit ElabError(std::string message, SourcePos pos = {})
        : Error(ErrorKind::Elab, std::move(message), pos) {}
};

class EvalError : public Error {
public:
    explicit EvalError(std::string message, SourcePos pos = {})
        : Error(ErrorKind::Eval, std::move(message), pos) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::string message) : Error(ErrorKind::Config, std::move(message)) {}
};

class LimitError : public Error {
public:
    explicit LimitError(std::string message) : Error(ErrorKind::Limit, std::move(message)) {}
};

/// Non-fatal diagnostic attached to an elaborated model.
struct Diagnostic {
    SourcePos pos;
    std::string message;
};

} // namespace patchq
