#include "vsgsim/hil.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstring>
#include <stdexcept>
#include <thread>

#include "splitmix.hpp"

namespace vsgsim {

namespace {

void put_u32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put_f64(std::uint8_t* p, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) p[i] = static_cast<std::uint8_t>(bits >> (8 * i));
}

double get_f64(const std::uint8_t* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
        throw std::invalid_argument("bad IPv4 address '" + host + "'");
    return addr;
}

void set_recv_timeout(int fd, int ms) {
    timeval tv{};
    tv.tv_sec = ms / 1000;
    tv.tv_usec = (ms % 1000) * 1000;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

}  // namespace

std::array<std::uint8_t, kTickFrameSize> encode_tick(const TickFrame& f) {
    std::array<std::uint8_t, kTickFrameSize> buf{};
    std::memcpy(buf.data(), kFrameMagic.data(), 4);
    put_u32(buf.data() + 4, f.seq);
    put_f64(buf.data() + 8, f.t);
    put_f64(buf.data() + 16, f.freq_dev);
    put_f64(buf.data() + 24, f.rocof);
    put_f64(buf.data() + 32, f.res_power);
    return buf;
}

std::array<std::uint8_t, kParamFrameSize> encode_params(const ParamFrame& f) {
    std::array<std::uint8_t, kParamFrameSize> buf{};
    std::memcpy(buf.data(), kFrameMagic.data(), 4);
    put_u32(buf.data() + 4, f.seq);
    put_f64(buf.data() + 8, f.inertia);
    put_f64(buf.data() + 16, f.damping);
    put_f64(buf.data() + 24, f.droop);
    return buf;
}

std::optional<TickFrame> decode_tick(std::span<const std::uint8_t> buf) {
    if (buf.size() != kTickFrameSize) return std::nullopt;
    if (std::memcmp(buf.data(), kFrameMagic.data(), 4) != 0) return std::nullopt;
    TickFrame f;
    f.seq = get_u32(buf.data() + 4);
    f.t = get_f64(buf.data() + 8);
    f.freq_dev = get_f64(buf.data() + 16);
    f.rocof = get_f64(buf.data() + 24);
    f.res_power = get_f64(buf.data() + 32);
    return f;
}

std::optional<ParamFrame> decode_params(std::span<const std::uint8_t> buf) {
    if (buf.size() != kParamFrameSize) return std::nullopt;
    if (std::memcmp(buf.data(), kFrameMagic.data(), 4) != 0) return std::nullopt;
    ParamFrame f;
    f.seq = get_u32(buf.data() + 4);
    f.inertia = get_f64(buf.data() + 8);
    f.damping = get_f64(buf.data() + 16);
    f.droop = get_f64(buf.data() + 24);
    return f;
}

HilServer::HilServer(const std::string& host, std::uint16_t port,
                     std::unique_ptr<Controller> controller, ServeOptions opts)
    : controller_(std::move(controller)), opts_(opts) {
    if (!controller_) throw std::invalid_argument("server needs a controller");
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw std::runtime_error("socket() failed");
    sockaddr_in addr = make_addr(host, port);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    sockaddr_in bound{};
    socklen_t len = sizeof bound;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
    port_ = ntohs(bound.sin_port);
    // Bounded receive wait so stop() is honored promptly.
    set_recv_timeout(fd_, 100);
}

HilServer::~HilServer() {
    if (fd_ >= 0) ::close(fd_);
}

void HilServer::run() {
    std::uint64_t drop_counter = 0;
    std::array<std::uint8_t, 128> buf;
    while (!stop_.load(std::memory_order_relaxed)) {
        sockaddr_in peer{};
        socklen_t peer_len = sizeof peer;
        const ssize_t n = ::recvfrom(fd_, buf.data(), buf.size(), 0,
                                     reinterpret_cast<sockaddr*>(&peer), &peer_len);
        if (n < 0) continue;  // timeout or transient error; re-check stop flag
        const auto tick = decode_tick({buf.data(), static_cast<std::size_t>(n)});
        if (!tick) {
            ++stats_.malformed;
            continue;
        }
        if (opts_.drop_rate > 0 &&
            detail::uniform01(detail::mix64(opts_.drop_seed, drop_counter++)) <
                opts_.drop_rate) {
            ++stats_.dropped;
            continue;
        }
        ControlInput ci{tick->t, tick->freq_dev, tick->rocof, tick->res_power};
        const VirtualParams vp = controller_->step(ci);
        if (opts_.latency_ms > 0)
            std::this_thread::sleep_for(std::chrono::milliseconds(opts_.latency_ms));
        ParamFrame reply{tick->seq, vp.inertia, vp.damping, vp.droop};
        const auto out = encode_params(reply);
        ::sendto(fd_, out.data(), out.size(), 0, reinterpret_cast<sockaddr*>(&peer),
                 peer_len);
        ++stats_.answered;
    }
}

void HilServer::stop() { stop_.store(true, std::memory_order_relaxed); }

RemoteController::RemoteController(const std::string& host, std::uint16_t port,
                                   int timeout_ms, VirtualParams initial)
    : timeout_ms_(timeout_ms), last_(initial) {
    if (timeout_ms <= 0) throw std::invalid_argument("timeout must be positive");
    fd_ = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd_ < 0) throw std::runtime_error("socket() failed");
    sockaddr_in addr = make_addr(host, port);
    if (::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd_);
        fd_ = -1;
        throw std::runtime_error("cannot reach " + host + ":" + std::to_string(port));
    }
}

RemoteController::~RemoteController() {
    if (fd_ >= 0) ::close(fd_);
}

VirtualParams RemoteController::step(const ControlInput& in) {
    const std::uint32_t seq = ++seq_;
    const auto frame = encode_tick({seq, in.t, in.freq_dev, in.rocof, in.res_power});
    if (::send(fd_, frame.data(), frame.size(), 0) != static_cast<ssize_t>(frame.size())) {
        ++losses_;
        return last_;
    }

    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    std::array<std::uint8_t, 128> buf;
    for (;;) {
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   deadline - std::chrono::steady_clock::now())
                                   .count();
        if (remaining <= 0) break;
        pollfd pfd{fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, static_cast<int>(remaining));
        if (ready <= 0) break;
        const ssize_t n = ::recv(fd_, buf.data(), buf.size(), 0);
        if (n < 0) break;
        const auto reply = decode_params({buf.data(), static_cast<std::size_t>(n)});
        if (!reply || reply->seq != seq) continue;  // stale or malformed; keep waiting
        last_ = clamp_virtual_params({reply->inertia, reply->damping, reply->droop});
        return last_;
    }
    ++losses_;
    return last_;
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == endpoint.size())
        throw std::invalid_argument("endpoint must be host:port");
    const std::string host = endpoint.substr(0, colon);
    const std::string port_text = endpoint.substr(colon + 1);
    unsigned port = 0;
    auto [p, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || p != port_text.data() + port_text.size() || port > 65535)
        throw std::invalid_argument("bad port '" + port_text + "'");
    return {host, static_cast<std::uint16_t>(port)};
}

}  // namespace vsgsim
