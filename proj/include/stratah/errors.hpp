#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace stratah {

enum class ErrorCode {
  invalid_input,
  parse_error,
  zero_events,
  tau_beyond_data,
  missing_stratum_arm,
  invalid_pairing,
  simulation_failure,
};

// Base for all library errors.  The code maps one-to-one onto CLI exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

struct InvalidInput : Error {
  explicit InvalidInput(std::string msg)
      : Error(ErrorCode::invalid_input, std::move(msg)) {}
};

// Tabular input rejected; `line` is the 1-based line number in the file.
struct ParseError : Error {
  ParseError(std::string msg, long line_number)
      : Error(ErrorCode::parse_error,
              "line " + std::to_string(line_number) + ": " + msg),
        line(line_number) {}
  long line;
};

struct ZeroEvents : Error {
  explicit ZeroEvents(std::string msg)
      : Error(ErrorCode::zero_events, std::move(msg)) {}
};

// The survival curve is not estimable at the requested truncation time
// (risk set exhausted by censoring before tau).
struct TauBeyondData : Error {
  explicit TauBeyondData(std::string msg, std::string stratum_label = {})
      : Error(ErrorCode::tau_beyond_data, std::move(msg)),
        stratum(std::move(stratum_label)) {}
  std::string stratum;
};

struct MissingStratumArm : Error {
  explicit MissingStratumArm(std::string msg)
      : Error(ErrorCode::missing_stratum_arm, std::move(msg)) {}
};

struct InvalidPairing : Error {
  explicit InvalidPairing(std::string msg)
      : Error(ErrorCode::invalid_pairing, std::move(msg)) {}
};

struct SimulationFailure : Error {
  explicit SimulationFailure(std::string msg)
      : Error(ErrorCode::simulation_failure, std::move(msg)) {}
};

}  // namespace stratah
