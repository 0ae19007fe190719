#pragma once

namespace trobust {

// Bracket entering the independence-Jeffreys prior on nu:
//   psi'(nu/2) - psi'((nu+1)/2) - 2 (nu+3) / (nu (nu+1)^2).
// Positive for all nu > 0, decays like 6 / nu^4.
double jeffreysNuBracket(double nu);

// Bracket from the (sigma, nu) block of the expected information:
//   psi'(nu/2) - psi'((nu+1)/2) - 2 (nu+5) / (nu (nu+1) (nu+3)).
// Positive for all nu > 0, decays like 14 / nu^4.
double nuBlockBracket(double nu);

// log of the independence-Jeffreys prior density (unnormalized):
//   -log sigma + (1/2) log(nu/(nu+3)) + (1/2) log jeffreysNuBracket(nu).
double jeffreysIndependenceLogPrior(double sigma, double nu);

// log of the nu-block prior density (unnormalized):
//   (1/2) log nuBlockBracket(nu).
double nuBlockLogPrior(double nu);

}  // namespace trobust
