#pragma once

#include "mlunify/errors.hpp"
#include "mlunify/kernel.hpp"
#include "mlunify/syntax.hpp"
#include "mlunify/unifier.hpp"
#include "mlunify/encoder.hpp"
#include "mlunify/semantics.hpp"
#include "mlunify/certificate.hpp"
#include "mlunify/proofgen.hpp"
#include "mlunify/proofcheck.hpp"
