DQN1 = "dqn1"
DQN2 = "dqn2"
DQN3 = "dqn3"
RRR = "rrr"
MRR = "mrr"
MRM = "mrm"
FRM = "frm"
RRM = "rrm"
MM_NOIRS = "mm-noirs"

ALL = (DQN1, DQN2, DQN3, RRR, MRR, MRM, FRM, RRM, MM_NOIRS)
