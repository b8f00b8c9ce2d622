#pragma once

#include <array>
#include <string>
#include <string_view>

namespace kaonlab {

/// Prepared kaon state. K0/K0bar are flavor eigenstates, K1/K2 CP eigenstates,
/// KS/KL the short- and long-lived states.
enum class Flavor { K0, K0bar, K1, K2, KS, KL };

enum class Channel { TwoPion, ThreePion, SemileptonicPlus, SemileptonicMinus };

enum class LeptonSign { Plus, Minus };

inline constexpr std::array<Channel, 4> kAllChannels = {
    Channel::TwoPion, Channel::ThreePion, Channel::SemileptonicPlus, Channel::SemileptonicMinus};

std::string_view to_string(Flavor f);
std::string_view to_string(Channel c);
Flavor parse_flavor(std::string_view name);
Channel parse_channel(std::string_view name);

inline Channel semileptonic_channel(LeptonSign sign) {
  return sign == LeptonSign::Plus ? Channel::SemileptonicPlus : Channel::SemileptonicMinus;
}

}  // namespace kaonlab
