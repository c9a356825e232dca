#include "matheval/normalize.hpp"

namespace matheval::answers {

// Embedded copy of data/normalization_tables.txt (version 1). The unit test
// suite asserts the two stay in sync.
const char* builtin_tables_text() {
    return
        "# answer normalization tables\n"
        "# escapes: \\\\ backslash, \\t tab, \\n newline, \\r CR\n"
        "version 1\n"
        "[substitutions]\n"
        "an \t\n"
        "a \t\n"
        ".$\t$\n"
        "\\\\$\t\n"
        "\\\\ \t\n"
        " \t\n"
        "mbox\ttext\n"
        ",\\\\text{and}\t,\n"
        "\\\\text{and}\t,\n"
        "\\\\text{m}\t\\\\text{}\n"
        "[removals]\n"
        "square\n"
        "ways\n"
        "integers\n"
        "dollars\n"
        "mph\n"
        "inches\n"
        "ft\n"
        "hours\n"
        "km\n"
        "units\n"
        "\\\\ldots\n"
        "sue\n"
        "points\n"
        "feet\n"
        "minutes\n"
        "digits\n"
        "cents\n"
        "degrees\n"
        "cm\n"
        "gm\n"
        "pounds\n"
        "meters\n"
        "meals\n"
        "edges\n"
        "students\n"
        "childrentickets\n"
        "multiples\n"
        "\\\\text{s}\n"
        "\\\\text{.}\n"
        "\\\\text{\\ns}\n"
        "\\\\text{}^2\n"
        "\\\\text{}^3\n"
        "\\\\text{\\n}\n"
        "\\\\text{}\n"
        "\\\\mathrm{th}\n"
        "^\\\\circ\n"
        "^{\\\\circ}\n"
        "\\\\;\n"
        ",\\\\!\n"
        "{,}\n"
        "\"\n"
        "\\\\dots\n"
        "[rules]\n"
        "split-equals-last\n"
        "substitutions\n"
        "removals\n"
        "extract-dollar\n"
        "unwrap-text\n"
        "unwrap-textbf\n"
        "unwrap-overline\n"
        "unwrap-boxed\n"
        "expand-frac\n"
        "expand-sqrt\n"
        "strip-dollar\n"
        "collapse-comma-digits\n"
        "[units]\n"
        "eV\n"
        " \\\\mathrm{~kg} \\\\cdot \\\\mathrm{m} / \\\\mathrm{s}\n"
        " kg m/s\n"
        "kg*m/s\n"
        "kg\n"
        "m/s\n"
        "m / s\n"
        "m s^{-1}\n"
        "\\\\text{ m/s}\n"
        " \\\\mathrm{m/s}\n"
        " \\\\text{ m/s}\n"
        "g/mole\n"
        "g/mol\n"
        "\\\\mathrm{~g}\n"
        "\\\\mathrm{~g} / \\\\mathrm{mol}\n"
        "W\n"
        "erg/s\n"
        "years\n"
        "year\n"
        "cm\n"
        "[maybe-units]\n"
        "m\n"
        "s\n"
        "cm\n"
        "";
}

}  // namespace matheval::answers
