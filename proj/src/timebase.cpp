#include "cgprof/timebase.hpp"

#include "cgprof/error.hpp"

namespace cgprof {

Timestamp TimeSource::advance(Nanos dt) {
    if (mode_ != ClockMode::Virtual) {
        throw ClockError("advance() on a real-time source");
    }
    if (dt < 0) {
        throw ClockError("advance() by a negative duration");
    }
    current_.ns += dt;
    return current_;
}

void TimeSource::spend(Nanos dt) {
    if (dt <= 0) {
        return;
    }
    if (mode_ == ClockMode::Virtual) {
        current_.ns += dt;
        return;
    }
    const Timestamp until = now() + dt;
    while (now() < until) {
    }
}

}  // namespace cgprof
