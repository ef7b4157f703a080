// Shells one interval of the fourth pinched Veronese poset and prints a summary.

#include <iostream>

#include "vshell/vshell.hpp"

int main(int argc, char** argv) {
    using namespace vshell;
    const auto z = LatticeVector::parse(argc > 1 ? argv[1] : "2,3,3,4");

    PinchedSheller sheller(z.size());
    const auto& iv = sheller.interval(z);
    const auto order = sheller.shell_pinched_interval(z);
    const auto check = verify_shelling(iv.poset, order);

    std::cout << "[0, " << z.to_string() << "]: " << iv.poset.size() << " elements, " << order.size() << " maximal chains\n";
    if (!check.ok()) {
        std::cout << "not a shelling: " << check.report.message << "\n";
        return 1;
    }
    std::cout << "shelling certified, " << check.certificate->homology_facet_count()
              << " homology facets, mobius " << mobius(iv.poset, iv.poset.bottom(), iv.poset.require_top()) << "\n";
    std::cout << "first chain:";
    for (ElementId x : order.front()) std::cout << ' ' << iv.vec(x).to_string();
    std::cout << "\n";
}
