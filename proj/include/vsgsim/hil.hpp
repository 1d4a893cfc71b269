#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "vsgsim/controller.hpp"

namespace vsgsim {

// Little-endian wire protocol, magic "VSG1". One request/reply pair per tick.
inline constexpr std::array<std::uint8_t, 4> kFrameMagic{'V', 'S', 'G', '1'};
inline constexpr std::size_t kTickFrameSize = 40;
inline constexpr std::size_t kParamFrameSize = 32;

/// Simulator -> controller: the per-tick measurement set.
struct TickFrame {
    std::uint32_t seq = 0;
    double t = 0.0;
    double freq_dev = 0.0;
    double rocof = 0.0;
    double res_power = 0.0;
};

/// Controller -> simulator: the parameter triple, echoing the request seq.
struct ParamFrame {
    std::uint32_t seq = 0;
    double inertia = 0.0;
    double damping = 0.0;
    double droop = 0.0;
};

std::array<std::uint8_t, kTickFrameSize> encode_tick(const TickFrame& f);
std::array<std::uint8_t, kParamFrameSize> encode_params(const ParamFrame& f);
std::optional<TickFrame> decode_tick(std::span<const std::uint8_t> buf);
std::optional<ParamFrame> decode_params(std::span<const std::uint8_t> buf);

struct ServeOptions {
    double drop_rate = 0.0;  // injected request loss fraction, for testing
    std::uint64_t drop_seed = 1;
    int latency_ms = 0;  // injected reply delay
};

struct ServeStats {
    std::uint64_t answered = 0;
    std::uint64_t malformed = 0;
    std::uint64_t dropped = 0;  // injected
};

/// Single-threaded frame loop owning one controller. `run()` blocks until
/// `stop()` is called from another thread (or forever, for the CLI).
class HilServer {
public:
    HilServer(const std::string& host, std::uint16_t port,
              std::unique_ptr<Controller> controller, ServeOptions opts = {});
    ~HilServer();

    HilServer(const HilServer&) = delete;
    HilServer& operator=(const HilServer&) = delete;

    std::uint16_t port() const { return port_; }
    const ServeStats& stats() const { return stats_; }
    void run();
    void stop();

private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
    std::unique_ptr<Controller> controller_;
    ServeOptions opts_;
    ServeStats stats_;
    std::atomic<bool> stop_{false};
};

/// Sends each tick to a remote controller and waits for the matching reply;
/// on timeout the last known parameters are reused and the loss counter grows.
class RemoteController final : public Controller {
public:
    RemoteController(const std::string& host, std::uint16_t port, int timeout_ms,
                     VirtualParams initial = midrange_virtual_params());
    ~RemoteController();

    RemoteController(const RemoteController&) = delete;
    RemoteController& operator=(const RemoteController&) = delete;

    VirtualParams step(const ControlInput& in) override;
    std::uint64_t losses() const { return losses_; }

private:
    int fd_ = -1;
    int timeout_ms_ = 50;
    std::uint32_t seq_ = 0;
    VirtualParams last_;
    std::uint64_t losses_ = 0;
};

/// Splits "host:port"; throws std::invalid_argument on malformed input.
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace vsgsim
