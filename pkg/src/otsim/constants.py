from scipy import constants as _c

K_B = _c.k  # J/K
Q_E = _c.e  # C
K_B_EV = _c.k / _c.e  # eV/K
N_A = _c.N_A  # 1/mol
ROOM_TEMPERATURE = 293.15  # K
