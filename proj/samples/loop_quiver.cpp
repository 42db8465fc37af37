// Absolutely stable representations of the 2-loop quiver: the counting
// polynomials, their (q-1)-expansion, and a brute-force check over F_2.

#include <iostream>

#include "qstable/oracle/oracle.hpp"
#include "qstable/qstable.hpp"

using namespace qstable;

int main() {
    const auto ctx = CountingContext::trivial(Quiver::loops(2), 4);
    const auto a = a_series(ctx);
    for (const auto& row : positivity_report(ctx.quiver, a)) {
        std::cout << "a_" << row.alpha << " = " << row.poly_q << "\n    linear (q-1)-coefficient "
                  << row.linear_term.get_str() << ", primitive necklaces " << row.necklace->get_str() << "\n";
    }

    const DimVector alpha{3};
    const auto classes = oracle::count_abs_stable_classes(ctx.quiver, alpha, ctx.theta, 2);
    std::cout << "over F_2: " << classes.get_str() << " classes in dimension 3, formula gives "
              << a.at(alpha).evaluate(2).get_str() << "\n";
    return classes == a.at(alpha).evaluate(2) ? 0 : 1;
}
