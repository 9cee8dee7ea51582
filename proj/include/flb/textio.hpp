#pragma once

// Line-oriented model files.
//
//   # comment
//   measure P [probability|subnormalized|generic]    blocks end with "end"
//     0 0.89
//     1 0.11
//   end
//   joint PAE [kind]        entries: row col weight
//   Entries may carry their keyword: "atom 0 0.89", "joint a e 0.1", "kernel x y 0.5".
//   kernel W                entries: input output probability
//   triple T                entries: x y z weight
//   channel C 2 [3 ...]     cyclic factors; entries: x [y~] weight
//   bsc C 0.11
//   pair P Q
//   wiretap CY CZ [W]
//   bpsk 1 4

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "flb/measures.hpp"
#include "flb/tasks.hpp"

namespace flb {

class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, int line, const std::string& msg);
    int line() const { return line_; }

private:
    int line_;
};

struct Model {
    struct PairRef {
        std::string p, q;
        int line = 0;
    };
    struct WiretapRef {
        std::string y, z, witness;
        int line = 0;
    };

    std::map<std::string, DiscreteMeasure> measures;
    std::map<std::string, JointMeasure> joints;
    std::map<std::string, ConditionalKernel> kernels;
    std::map<std::string, TripleMeasure> triples;
    std::map<std::string, ConditionalAdditiveChannel> channels;
    std::vector<std::string> channel_order;
    std::vector<PairRef> pairs;
    std::vector<WiretapRef> wiretaps;
    std::vector<BpskPair> bpsk;

    WiretapPair wiretap(const WiretapRef& w) const;
};

Model parse_model(std::istream& in, const std::string& source = "<input>");
Model parse_model_file(const std::string& path);

// Strict number parsing shared with the sweep reader.
bool parse_double(const std::string& s, double& out);
bool parse_int(const std::string& s, long long& out);

}  // namespace flb
