#pragma once

// Newline-delimited JSON membership protocol:
//
//   client: {"type":"hello","vars":[...]}          server: {"type":"ready","vars":[...]}
//   client: {"type":"membership","id":n,"model":[0,1,...]}
//   server: {"type":"answer","id":n,"label":"positive"|"negative"}
//   client: {"type":"bye"}
//
// A server that cannot handle a message replies {"type":"error","reason":...}.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "hornenv/model.hpp"
#include "hornenv/oracle.hpp"

namespace hornenv {

class LineChannel {
 public:
  virtual ~LineChannel() = default;
  // `line` must not contain '\n'; the terminator is appended.
  virtual void write_line(std::string_view line) = 0;
  // nullopt on orderly end of stream.
  virtual std::optional<std::string> read_line() = 0;
  virtual void close() = 0;
};

// Line channel over a pair of file descriptors (a pipe pair or one socket).
// Owns the descriptors and, if given, reaps the child process on close.
class FdChannel final : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, int child_pid = -1);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void write_line(std::string_view line) override;
  std::optional<std::string> read_line() override;
  void close() override;

  // Milliseconds to wait for each read; 0 waits forever.
  void set_read_timeout(int ms) { timeout_ms_ = ms; }
  int child_pid() const noexcept { return child_; }

 private:
  int rfd_;
  int wfd_;
  int child_;
  int timeout_ms_ = 0;
  std::string buffer_;
};

// Runs `command` through /bin/sh with its stdin/stdout connected to the channel.
std::unique_ptr<FdChannel> spawn_subprocess(const std::string& command);
std::unique_ptr<FdChannel> connect_tcp(const std::string& host, std::uint16_t port);

// Loopback-by-default listening socket; port 0 picks a free port.
class TcpListener {
 public:
  explicit TcpListener(std::uint16_t port = 0, const std::string& host = "127.0.0.1");
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::unique_ptr<FdChannel> accept();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

struct Endpoint {
  enum class Kind { subprocess, tcp };
  Kind kind = Kind::subprocess;
  std::string command;  // subprocess
  std::string host;     // tcp
  std::uint16_t port = 0;

  static Endpoint process(std::string command);
  // "host:port" or ":port" (loopback).
  static Endpoint parse_tcp(std::string_view spec);
};

// Membership oracle backed by a remote peer. Requests are sent one at a time
// and each answer must echo the request id.
class ExternalOracle final : public MembershipOracle {
 public:
  // Performs the handshake; throws ConfigError if the peer's universe differs.
  ExternalOracle(std::unique_ptr<LineChannel> channel, VariableUniverse vars);
  ~ExternalOracle() override;

  std::size_t width() const override { return vars_.size(); }
  Label classify(const Model& x) override;

  // Sends "bye" and closes the channel. Idempotent.
  void shutdown();

 private:
  std::string read_reply(std::string_view expecting);

  std::unique_ptr<LineChannel> channel_;
  VariableUniverse vars_;
  std::uint64_t next_id_ = 1;
  bool open_ = false;
};

std::unique_ptr<ExternalOracle> external_oracle_connect(const Endpoint& endpoint,
                                                        const VariableUniverse& vars);

struct ServeStats {
  std::size_t answered = 0;
  std::size_t errors = 0;
  bool said_bye = false;
};

// Server side of the protocol. Answers from `oracle` until "bye" or end of
// stream. A hello whose vars differ from `vars` is rejected and ends the
// session.
ServeStats serve_membership(LineChannel& channel, MembershipOracle& oracle,
                            const VariableUniverse& vars);

}  // namespace hornenv
