# Coefficient spaces: l^p(l^q), f_{p,q} and the Haar bridge
