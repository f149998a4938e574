#include "hornenv/wire.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <json.hpp>

#include "hornenv/errors.hpp"

namespace hornenv {

using json = nlohmann::json;

namespace {

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

void ignore_sigpipe() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

}  // namespace

FdChannel::FdChannel(int read_fd, int write_fd, int child_pid)
    : rfd_(read_fd), wfd_(write_fd), child_(child_pid) {
  ignore_sigpipe();
}

FdChannel::~FdChannel() { close(); }

void FdChannel::write_line(std::string_view line) {
  if (wfd_ < 0) throw TransportError("write on closed channel");
  std::string buf(line);
  buf += '\n';
  std::size_t off = 0;
  while (off < buf.size()) {
    const ssize_t n = ::write(wfd_, buf.data() + off, buf.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("write"));
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> FdChannel::read_line() {
  if (rfd_ < 0) throw TransportError("read on closed channel");
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    if (timeout_ms_ > 0) {
      pollfd p{rfd_, POLLIN, 0};
      const int r = ::poll(&p, 1, timeout_ms_);
      if (r < 0 && errno == EINTR) continue;
      if (r < 0) throw TransportError(errno_text("poll"));
      if (r == 0) throw TransportError("timed out waiting for oracle reply");
    }
    char chunk[4096];
    const ssize_t n = ::read(rfd_, chunk, sizeof chunk);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(errno_text("read"));
    }
    if (n == 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string line = std::move(buffer_);
      buffer_.clear();
      return line;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void FdChannel::close() {
  if (wfd_ >= 0 && wfd_ != rfd_) ::close(wfd_);
  if (rfd_ >= 0) ::close(rfd_);
  rfd_ = wfd_ = -1;
  if (child_ > 0) {
    // Give the child a second to exit on EOF, then terminate it.
    int status = 0;
    pid_t r = 0;
    for (int i = 0; i < 100 && (r = ::waitpid(child_, &status, WNOHANG)) == 0; ++i) ::usleep(10000);
    if (r == 0) {
      ::kill(child_, SIGTERM);
      while (::waitpid(child_, &status, 0) < 0 && errno == EINTR) {
      }
    }
    child_ = -1;
  }
}

std::unique_ptr<FdChannel> spawn_subprocess(const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (::pipe2(to_child, O_CLOEXEC) != 0) throw TransportError(errno_text("pipe"));
  if (::pipe2(from_child, O_CLOEXEC) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw TransportError(errno_text("pipe"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw TransportError(errno_text("fork"));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::signal(SIGPIPE, SIG_DFL);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  return std::make_unique<FdChannel>(from_child[0], to_child[1], pid);
}

std::unique_ptr<FdChannel> connect_tcp(const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string service = std::to_string(port);
  if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &res); rc != 0) {
    throw TransportError("resolve " + host + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  std::string last = "no addresses";
  for (addrinfo* a = res; a; a = a->ai_next) {
    fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
    if (fd < 0) {
      last = errno_text("socket");
      continue;
    }
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
    last = errno_text("connect");
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw TransportError(host + ":" + service + ": " + last);
  return std::make_unique<FdChannel>(fd, fd);
}

TcpListener::TcpListener(std::uint16_t port, const std::string& host) {
  fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd_ < 0) throw TransportError(errno_text("socket"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd_);
    throw ConfigError("listen address must be an IPv4 literal: " + host);
  }
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd_, 4) != 0) {
    const std::string msg = errno_text("bind/listen");
    ::close(fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<FdChannel> TcpListener::accept() {
  for (;;) {
    const int c = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (c >= 0) return std::make_unique<FdChannel>(c, c);
    if (errno != EINTR) throw TransportError(errno_text("accept"));
  }
}

Endpoint Endpoint::process(std::string command) {
  Endpoint e;
  e.kind = Kind::subprocess;
  e.command = std::move(command);
  return e;
}

Endpoint Endpoint::parse_tcp(std::string_view spec) {
  const auto colon = spec.rfind(':');
  if (colon == std::string_view::npos) throw ConfigError("expected HOST:PORT, got '" + std::string(spec) + "'");
  Endpoint e;
  e.kind = Kind::tcp;
  e.host = colon == 0 ? "127.0.0.1" : std::string(spec.substr(0, colon));
  const auto digits = spec.substr(colon + 1);
  unsigned value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || value == 0 || value > 65535) {
    throw ConfigError("bad port in '" + std::string(spec) + "'");
  }
  e.port = static_cast<std::uint16_t>(value);
  return e;
}

namespace {

json parse_message(const std::string& line) {
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::parse_error&) {
    throw ProtocolError("reply is not valid JSON", line);
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    throw ProtocolError("reply lacks a string \"type\" field", line);
  }
  return msg;
}

json vars_json(const VariableUniverse& vars) { return json(vars.names()); }

}  // namespace

ExternalOracle::ExternalOracle(std::unique_ptr<LineChannel> channel, VariableUniverse vars)
    : channel_(std::move(channel)), vars_(std::move(vars)) {
  open_ = true;
  channel_->write_line(json{{"type", "hello"}, {"vars", vars_json(vars_)}}.dump());
  const std::string line = read_reply("ready");
  const json msg = parse_message(line);
  const auto type = msg["type"].get<std::string>();
  if (type == "error") {
    shutdown();
    throw ConfigError("oracle rejected handshake: " + msg.value("reason", std::string("?")));
  }
  if (type != "ready" || !msg.contains("vars") || !msg["vars"].is_array()) {
    throw ProtocolError("expected ready message", line);
  }
  std::vector<std::string> theirs;
  for (const auto& v : msg["vars"]) {
    if (!v.is_string()) throw ProtocolError("non-string variable name in ready", line);
    theirs.push_back(v.get<std::string>());
  }
  if (theirs != vars_.names()) {
    shutdown();
    throw ConfigError("oracle universe (" + std::to_string(theirs.size()) +
                      " vars) does not match client universe (" + std::to_string(vars_.size()) +
                      " vars)");
  }
}

ExternalOracle::~ExternalOracle() {
  try {
    shutdown();
  } catch (...) {
  }
}

void ExternalOracle::shutdown() {
  if (!open_) return;
  open_ = false;
  try {
    channel_->write_line(json{{"type", "bye"}}.dump());
  } catch (const TransportError&) {
  }
  channel_->close();
}

std::string ExternalOracle::read_reply(std::string_view expecting) {
  auto line = channel_->read_line();
  if (!line) throw TransportError("oracle closed the connection while awaiting " + std::string(expecting));
  return *line;
}

Label ExternalOracle::classify(const Model& x) {
  if (!open_) throw TransportError("oracle connection is closed");
  if (x.width() != vars_.size()) throw UsageError("model width does not match oracle universe");
  const std::uint64_t id = next_id_++;
  std::vector<int> bits(x.width());
  for (std::size_t i = 0; i < x.width(); ++i) bits[i] = x.test(i) ? 1 : 0;
  channel_->write_line(json{{"type", "membership"}, {"id", id}, {"model", bits}}.dump());

  const std::string line = read_reply("answer");
  const json msg = parse_message(line);
  const auto type = msg["type"].get<std::string>();
  if (type == "error") throw ProtocolError("oracle reported an error", line);
  if (type != "answer") throw ProtocolError("expected answer message", line);
  if (!msg.contains("id") || !msg["id"].is_number_unsigned() || msg["id"].get<std::uint64_t>() != id) {
    throw ProtocolError("answer id does not match request " + std::to_string(id), line);
  }
  if (!msg.contains("label") || !msg["label"].is_string()) throw ProtocolError("answer lacks label", line);
  const auto label = msg["label"].get<std::string>();
  if (label == "positive") return Label::positive;
  if (label == "negative") return Label::negative;
  throw ProtocolError("unknown label '" + label + "'", line);
}

std::unique_ptr<ExternalOracle> external_oracle_connect(const Endpoint& endpoint,
                                                        const VariableUniverse& vars) {
  std::unique_ptr<LineChannel> ch;
  if (endpoint.kind == Endpoint::Kind::subprocess) {
    ch = spawn_subprocess(endpoint.command);
  } else {
    ch = connect_tcp(endpoint.host, endpoint.port);
  }
  return std::make_unique<ExternalOracle>(std::move(ch), vars);
}

ServeStats serve_membership(LineChannel& channel, MembershipOracle& oracle,
                            const VariableUniverse& vars) {
  ServeStats stats;
  auto reject = [&](const std::string& reason) {
    ++stats.errors;
    channel.write_line(json{{"type", "error"}, {"reason", reason}}.dump());
  };
  bool greeted = false;
  std::uint64_t last_id = 0;
  while (auto line = channel.read_line()) {
    if (line->empty()) continue;
    json msg;
    try {
      msg = json::parse(*line);
    } catch (const json::parse_error&) {
      reject("invalid JSON");
      continue;
    }
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
      reject("missing type");
      continue;
    }
    const auto type = msg["type"].get<std::string>();
    if (type == "bye") {
      stats.said_bye = true;
      break;
    }
    if (type == "hello") {
      std::vector<std::string> theirs;
      if (msg.contains("vars") && msg["vars"].is_array()) {
        for (const auto& v : msg["vars"]) {
          if (v.is_string()) theirs.push_back(v.get<std::string>());
        }
      }
      if (theirs != vars.names()) {
        reject("universe mismatch: server has " + std::to_string(vars.size()) + " vars, client sent " +
               std::to_string(theirs.size()));
        break;
      }
      greeted = true;
      channel.write_line(json{{"type", "ready"}, {"vars", vars_json(vars)}}.dump());
      continue;
    }
    if (type != "membership") {
      reject("unknown message type '" + type + "'");
      continue;
    }
    if (!greeted) {
      reject("membership before hello");
      continue;
    }
    if (!msg.contains("id") || !msg["id"].is_number_unsigned() || !msg.contains("model") ||
        !msg["model"].is_array() || msg["model"].size() != vars.size()) {
      reject("malformed membership request");
      continue;
    }
    const auto id = msg["id"].get<std::uint64_t>();
    if (id <= last_id) {
      reject("request ids must increase");
      continue;
    }
    last_id = id;
    Model x(vars.size());
    bool ok = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto& b = msg["model"][i];
      if (!b.is_number_integer() || (b.get<int>() != 0 && b.get<int>() != 1)) {
        ok = false;
        break;
      }
      if (b.get<int>() == 1) x.set(i);
    }
    if (!ok) {
      reject("model entries must be 0 or 1");
      continue;
    }
    const Label label = oracle.classify(x);
    ++stats.answered;
    channel.write_line(
        json{{"type", "answer"}, {"id", id}, {"label", std::string(to_string(label))}}.dump());
  }
  return stats;
}

}  // namespace hornenv
