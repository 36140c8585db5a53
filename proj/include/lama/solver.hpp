#pragma once

// SMT-LIB2 solver process over stdin/stdout.
//
// Every command is sent on its own line. The session enables
// `:print-success`, so each command is answered by exactly one
// S-expression, which keeps the protocol in lockstep.

#include "lama/sexpr.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lama {

enum class SatResult { Sat, Unsat, Unknown };

const char* to_string(SatResult r);

struct SolverOptions {
  std::string command = "z3";
  std::vector<std::string> args = {"-in", "-smt2"};
  std::string logic = "ALL";
  double timeout_seconds = 0;  // per check-sat; 0 disables
  std::string replay_log;      // append every command here when non-empty
};

class SolverSession {
 public:
  // Spawns the solver and performs the option/logic handshake.
  // Throws SolverError on spawn or handshake failure.
  explicit SolverSession(SolverOptions opts);
  ~SolverSession();

  SolverSession(const SolverSession&) = delete;
  SolverSession& operator=(const SolverSession&) = delete;

  // Sends a command that must be answered with `success`.
  void command(const std::string& cmd);
  void declare(const std::string& cmd) { command(cmd); }
  void assert_formula(const Sexpr& f);
  void push();
  void pop();
  SatResult check_sat();
  std::vector<std::pair<Sexpr, Sexpr>> get_values(const std::vector<Sexpr>& terms);

  std::size_t depth() const { return depth_; }
  // Commands that shape the solver state, in order; replayed after a timeout.
  const std::vector<std::string>& history() const { return history_; }
  // Whether the last check_sat hit the timeout.
  bool timed_out() const { return timed_out_; }

  void close();

 private:
  SolverOptions opts_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::size_t depth_ = 0;
  std::vector<std::string> history_;
  std::unique_ptr<std::ofstream> log_;
  bool timed_out_ = false;

  void spawn();
  void kill_child();
  void send(const std::string& line);
  // One reply S-expression; nullopt on timeout. Throws SolverError on EOF.
  std::optional<std::string> read_reply(double timeout_seconds);
  void expect_success(const std::string& cmd, const std::string& reply);
  void handshake();
};

}  // namespace lama
