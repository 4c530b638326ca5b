#pragma once

#include "ascvqe/core.hpp"
#include "ascvqe/pauli.hpp"
#include "ascvqe/fcidump.hpp"
#include "ascvqe/integrals.hpp"
#include "ascvqe/excitation.hpp"
#include "ascvqe/jordan_wigner.hpp"
#include "ascvqe/mp2.hpp"
#include "ascvqe/statevector.hpp"
#include "ascvqe/ansatz.hpp"
#include "ascvqe/commutators.hpp"
#include "ascvqe/lbfgs.hpp"
#include "ascvqe/vqe.hpp"
#include "ascvqe/subspace.hpp"
#include "ascvqe/asc.hpp"
#include "ascvqe/oracle.hpp"
#include "ascvqe/io.hpp"
#include "ascvqe/pipeline.hpp"
