#include "albo/problems.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <sstream>

#include "albo/errors.hpp"

namespace albo {

// ---------------------------------------------------------------- numbers

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view token) {
  if (token.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------- box

Hyperrectangle Hyperrectangle::unit(std::size_t dim) {
  return {Vector(dim, 0.0), Vector(dim, 1.0)};
}

void Hyperrectangle::validate() const {
  if (lower.empty() || lower.size() != upper.size())
    throw InvalidArgument("Hyperrectangle: lower/upper must be nonempty and equal length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i]))
      throw InvalidArgument("Hyperrectangle: require finite lower < upper in every coordinate");
  }
}

bool Hyperrectangle::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  }
  return true;
}

Vector Hyperrectangle::to_unit(std::span<const double> x) const {
  Vector u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    u[i] = std::clamp((x[i] - lower[i]) / (upper[i] - lower[i]), 0.0, 1.0);
  return u;
}

Vector Hyperrectangle::from_unit(std::span<const double> u) const {
  Vector x(u.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    x[i] = std::clamp(lower[i] + u[i] * (upper[i] - lower[i]), lower[i], upper[i]);
  return x;
}

// ---------------------------------------------------------------- evaluation

bool Evaluation::valid() const {
  return std::all_of(c.begin(), c.end(), [](double v) { return v <= 0.0; });
}

bool Evaluation::valid_within(double tol) const {
  return std::all_of(c.begin(), c.end(), [tol](double v) { return std::max(0.0, v) <= tol; });
}

// ---------------------------------------------------------------- problem

Problem::Problem(std::string name, Hyperrectangle bounds, std::size_t m,
                 std::optional<Objective> known_objective, std::shared_ptr<Blackbox> blackbox)
    : name_(std::move(name)),
      bounds_(std::move(bounds)),
      m_(m),
      known_(std::move(known_objective)),
      blackbox_(std::move(blackbox)) {
  bounds_.validate();
  if (m_ == 0) throw InvalidArgument("Problem: at least one constraint is required");
  if (!blackbox_) throw InvalidArgument("Problem: missing blackbox");
}

double Problem::objective(std::span<const double> x) const {
  if (!known_) throw InvalidArgument("Problem: objective is not known in closed form");
  return (*known_)(x);
}

Evaluation Problem::evaluate(std::span<const double> x) {
  if (!bounds_.contains(x)) throw InvalidArgument("evaluate: x outside the bound box");
  BlackboxOutput out = blackbox_->evaluate(x);

  const std::size_t n = log_.size() + 1;
  auto context = [&] {
    std::ostringstream os;
    os << "evaluation " << n << " of '" << name_ << "' at x=(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << format_double(x[i]);
    os << ")";
    return os.str();
  };
  if (out.constraints.size() != m_)
    throw BlackboxError(context() + ": expected " + std::to_string(m_) + " constraint values");
  for (double v : out.constraints) {
    if (!std::isfinite(v)) throw BlackboxError(context() + ": non-finite constraint value");
  }
  double f = 0.0;
  if (known_) {
    f = (*known_)(x);
  } else {
    if (!out.objective) throw BlackboxError(context() + ": blackbox reported no objective");
    f = *out.objective;
  }
  if (!std::isfinite(f)) throw BlackboxError(context() + ": non-finite objective value");

  Evaluation e{Vector(x.begin(), x.end()), f, std::move(out.constraints), n};
  log_.push_back(e);
  return e;
}

// ---------------------------------------------------------------- toy

namespace toy {

double objective(std::span<const double> x) { return x[0] + x[1]; }

double constraint1(std::span<const double> x) {
  return 1.5 - x[0] - 2.0 * x[1] -
         0.5 * std::sin(2.0 * std::numbers::pi * (x[0] * x[0] - 2.0 * x[1]));
}

double constraint2(std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] - 1.5; }

}  // namespace toy

namespace {

class ToyBlackbox final : public Blackbox {
 public:
  BlackboxOutput evaluate(std::span<const double> x) override {
    return {toy::objective(x), {toy::constraint1(x), toy::constraint2(x)}};
  }
};

}  // namespace

Problem toy_problem() {
  return Problem("toy", Hyperrectangle::unit(2), 2, Objective(toy::objective),
                 std::make_shared<ToyBlackbox>());
}

// ---------------------------------------------------------------- subprocess

namespace {

class ChildProcess final : public Blackbox {
 public:
  ChildProcess(std::string command, std::size_t m, std::chrono::milliseconds timeout)
      : command_(std::move(command)), m_(m), timeout_(timeout) {
    ::signal(SIGPIPE, SIG_IGN);
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) throw BlackboxError("cannot create pipe: " + errno_text());
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw BlackboxError("cannot create pipe: " + errno_text());
    }
    pid_ = ::fork();
    if (pid_ < 0) throw BlackboxError("fork failed: " + errno_text());
    if (pid_ == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      ::execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    ::fcntl(write_fd_, F_SETFD, FD_CLOEXEC);
    ::fcntl(read_fd_, F_SETFD, FD_CLOEXEC);
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() override {
    if (write_fd_ >= 0) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    if (pid_ > 0) {
      // Closing stdin asks the child to exit; give it a moment, then kill.
      for (int i = 0; i < 50; ++i) {
        if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
        ::usleep(10000);
      }
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
    }
  }

  BlackboxOutput evaluate(std::span<const double> x) override {
    std::lock_guard lock(mutex_);
    std::string line;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) line += ' ';
      line += format_double(x[i]);
    }
    line += '\n';
    write_all(line);
    const std::string reply = read_line();
    return parse_reply(reply);
  }

 private:
  static std::string errno_text() { return std::strerror(errno); }

  void write_all(const std::string& data) {
    std::size_t off = 0;
    while (off < data.size()) {
      const ssize_t w = ::write(write_fd_, data.data() + off, data.size() - off);
      if (w < 0) {
        if (errno == EINTR) continue;
        throw BlackboxError("write to blackbox '" + command_ + "' failed: " + errno_text());
      }
      off += static_cast<std::size_t>(w);
    }
  }

  std::string read_line() {
    const auto deadline = std::chrono::steady_clock::now() + timeout_;
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0)
        throw BlackboxError("blackbox '" + command_ + "' timed out", buffer_);
      pollfd pfd{read_fd_, POLLIN, 0};
      const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
      if (pr < 0) {
        if (errno == EINTR) continue;
        throw BlackboxError("poll on blackbox '" + command_ + "' failed: " + errno_text());
      }
      if (pr == 0) continue;
      char chunk[4096];
      const ssize_t r = ::read(read_fd_, chunk, sizeof(chunk));
      if (r < 0) {
        if (errno == EINTR) continue;
        throw BlackboxError("read from blackbox '" + command_ + "' failed: " + errno_text());
      }
      if (r == 0) throw BlackboxError("blackbox '" + command_ + "' exited", buffer_);
      buffer_.append(chunk, static_cast<std::size_t>(r));
    }
  }

  BlackboxOutput parse_reply(const std::string& reply) const {
    std::vector<double> values;
    std::size_t pos = 0;
    while (pos < reply.size()) {
      while (pos < reply.size() && (reply[pos] == ' ' || reply[pos] == '\t')) ++pos;
      if (pos >= reply.size()) break;
      std::size_t end = pos;
      while (end < reply.size() && reply[end] != ' ' && reply[end] != '\t') ++end;
      const auto v = parse_double(std::string_view(reply).substr(pos, end - pos));
      if (!v) throw BlackboxError("unparseable number in blackbox reply", reply);
      values.push_back(*v);
      pos = end;
    }
    if (values.size() != m_ + 1)
      throw BlackboxError("blackbox reply has " + std::to_string(values.size()) +
                              " numbers, expected " + std::to_string(m_ + 1),
                          reply);
    BlackboxOutput out;
    out.objective = values[0];
    out.constraints.assign(values.begin() + 1, values.end());
    return out;
  }

  std::string command_;
  std::size_t m_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  std::string buffer_;
  std::mutex mutex_;
};

}  // namespace

Problem external_blackbox(const std::string& command, std::size_t dim, std::size_t m,
                          ExternalOptions options) {
  if (dim == 0) throw InvalidArgument("external_blackbox: dim must be positive");
  Hyperrectangle bounds = options.bounds.value_or(Hyperrectangle::unit(dim));
  if (bounds.dim() != dim) throw InvalidArgument("external_blackbox: bounds dimension mismatch");
  auto child = std::make_shared<ChildProcess>(command, m, options.timeout);
  return Problem("external:" + command, std::move(bounds), m, std::move(options.known_objective),
                 std::move(child));
}

}  // namespace albo
