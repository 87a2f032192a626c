#ifndef DCC_ERROR_HPP
#define DCC_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dcc {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class OutOfRange : public Error {
public:
    explicit OutOfRange(const std::string& what) : Error(what) {}
};

class BehindCamera : public Error {
public:
    explicit BehindCamera(const std::string& what) : Error(what) {}
};

// Decoder-side failure; carries the byte offset where the stream became
// undecodable.
class CorruptBitstream : public Error {
public:
    CorruptBitstream(const std::string& what, std::uint64_t byte_offset)
        : Error(what + " (byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}
    std::uint64_t byte_offset() const { return byte_offset_; }

private:
    std::uint64_t byte_offset_;
};

class StateError : public Error {
public:
    explicit StateError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

class ReconstructionError : public Error {
public:
    explicit ReconstructionError(const std::string& what) : Error(what) {}
};

} // namespace dcc

#endif // DCC_ERROR_HPP
