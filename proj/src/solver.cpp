#include "lama/solver.hpp"

#include "lama/error.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace lama {

const char* to_string(SatResult r) {
  switch (r) {
    case SatResult::Sat: return "sat";
    case SatResult::Unsat: return "unsat";
    case SatResult::Unknown: return "unknown";
  }
  return "?";
}

SolverSession::SolverSession(SolverOptions opts) : opts_(std::move(opts)) {
  std::signal(SIGPIPE, SIG_IGN);
  if (!opts_.replay_log.empty()) {
    log_ = std::make_unique<std::ofstream>(opts_.replay_log, std::ios::app);
    if (!*log_) throw SolverError("cannot open replay log " + opts_.replay_log);
  }
  spawn();
  handshake();
}

SolverSession::~SolverSession() {
  try {
    close();
  } catch (...) {
  }
}

void SolverSession::spawn() {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0) throw SolverError(std::string("pipe: ") + std::strerror(errno));
  if (pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SolverError(std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], 1);
  posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(opts_.command.c_str()));
  for (auto& a : opts_.args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_t pid;
  int rc = posix_spawnp(&pid, opts_.command.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    throw SolverError("cannot start solver '" + opts_.command + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
}

void SolverSession::kill_child() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    int status;
    waitpid(pid_, &status, 0);
  }
  pid_ = -1;
}

void SolverSession::handshake() {
  for (const std::string& cmd : {std::string("(set-option :print-success true)"),
                                 std::string("(set-option :produce-models true)"),
                                 "(set-logic " + opts_.logic + ")"}) {
    send(cmd);
    auto reply = read_reply(0);
    expect_success(cmd, *reply);
  }
}

void SolverSession::send(const std::string& line) {
  if (to_child_ < 0) throw SolverError("solver session is closed");
  if (log_) *log_ << line << '\n' << std::flush;
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverError("solver pipe closed while sending: " + line);
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> SolverSession::read_reply(double timeout_seconds) {
  using clock = std::chrono::steady_clock;
  auto deadline = clock::now() + std::chrono::duration<double>(timeout_seconds);
  for (;;) {
    std::size_t end = sexpr_end(buffer_);
    if (end != std::string::npos) {
      std::string reply = buffer_.substr(0, end);
      buffer_.erase(0, end);
      auto b = reply.find_first_not_of(" \t\r\n");
      return reply.substr(b);
    }
    int wait_ms = -1;
    if (timeout_seconds > 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
      if (left <= 0) return std::nullopt;
      wait_ms = static_cast<int>(left);
    }
    pollfd pfd{from_child_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("poll: ") + std::strerror(errno));
    }
    if (rc == 0) return std::nullopt;
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw SolverError(std::string("read: ") + std::strerror(errno));
    }
    if (n == 0) {
      // A final atom may be terminated by EOF instead of a newline.
      std::string rest = buffer_;
      auto b = rest.find_first_not_of(" \t\r\n");
      if (b != std::string::npos && rest[b] != '(') {
        buffer_.clear();
        return rest.substr(b, rest.find_last_not_of(" \t\r\n") - b + 1);
      }
      throw SolverError("solver terminated unexpectedly");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void SolverSession::expect_success(const std::string& cmd, const std::string& reply) {
  if (reply == "success") return;
  if (reply.rfind("(error", 0) == 0) throw SolverError(reply);
  throw SolverError("protocol desync: expected success for " + cmd + ", got " + reply);
}

void SolverSession::command(const std::string& cmd) {
  send(cmd);
  auto reply = read_reply(0);
  expect_success(cmd, *reply);
  history_.push_back(cmd);
}

void SolverSession::assert_formula(const Sexpr& f) { command("(assert " + f.str() + ")"); }

void SolverSession::push() {
  command("(push 1)");
  ++depth_;
}

void SolverSession::pop() {
  if (depth_ == 0) throw SolverError("pop on an empty assertion stack");
  command("(pop 1)");
  --depth_;
}

SatResult SolverSession::check_sat() {
  timed_out_ = false;
  send("(check-sat)");
  auto reply = read_reply(opts_.timeout_seconds);
  if (!reply) {
    timed_out_ = true;
    kill_child();
    spawn();
    handshake();
    for (const auto& cmd : history_) {
      send(cmd);
      expect_success(cmd, *read_reply(0));
    }
    return SatResult::Unknown;
  }
  if (*reply == "sat") return SatResult::Sat;
  if (*reply == "unsat") return SatResult::Unsat;
  if (*reply == "unknown") return SatResult::Unknown;
  if (reply->rfind("(error", 0) == 0) throw SolverError(*reply);
  throw SolverError("protocol desync: unexpected check-sat reply " + *reply);
}

std::vector<std::pair<Sexpr, Sexpr>> SolverSession::get_values(const std::vector<Sexpr>& terms) {
  std::vector<std::pair<Sexpr, Sexpr>> out;
  if (terms.empty()) return out;
  send("(get-value " + Sexpr::make_list(terms).str() + ")");
  auto reply = read_reply(0);
  if (reply->rfind("(error", 0) == 0) throw SolverError(*reply);
  Sexpr r = parse_sexpr(*reply);
  if (r.is_atom || r.list.size() != terms.size())
    throw SolverError("protocol desync: malformed get-value reply " + *reply);
  for (auto& pair : r.list) {
    if (pair.is_atom || pair.list.size() != 2)
      throw SolverError("protocol desync: malformed get-value pair " + pair.str());
    out.push_back({pair.list[0], pair.list[1]});
  }
  return out;
}

void SolverSession::close() {
  if (pid_ <= 0) return;
  try {
    send("(exit)");
  } catch (const SolverError&) {
  }
  ::close(to_child_);
  to_child_ = -1;
  // Give the solver a moment to exit on its own before killing it.
  for (int i = 0; i < 50; ++i) {
    int status;
    if (waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      break;
    }
    usleep(2000);
  }
  kill_child();
}

}  // namespace lama
