// The five-card trick on a 52-card deck.
#include <cstdio>

#include "cdtrade/cdtrade.hpp"

int main() {
    using namespace cdtrade;
    const CardTrickInstance deck(52, 5);
    const std::vector<Card> hand{3, 17, 24, 38, 51};
    const auto enc = encode_trick(deck, hand);
    std::printf("hidden %llu, shown in order:", static_cast<unsigned long long>(enc.hidden));
    for (auto c : enc.arrangement) std::printf(" %llu", static_cast<unsigned long long>(c));
    std::printf("\ndecoded %llu\n", static_cast<unsigned long long>(decode_trick(deck, enc.arrangement)));
    const auto r = verify_random(deck, 1000, 7);
    std::printf("random hands: %llu/%llu\n", static_cast<unsigned long long>(r.ok),
                static_cast<unsigned long long>(r.total));
}
