#ifndef VSHELL_VSHELL_HPP
#define VSHELL_VSHELL_HPP

#include "vshell/criteria.hpp"
#include "vshell/errors.hpp"
#include "vshell/io.hpp"
#include "vshell/lattice_vector.hpp"
#include "vshell/pinched_sheller.hpp"
#include "vshell/poset.hpp"
#include "vshell/shelling.hpp"
#include "vshell/topology.hpp"
#include "vshell/veronese.hpp"

#endif
