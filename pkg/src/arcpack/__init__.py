"""Arc-disjoint branchings, spanning-tree packings and hardness gadgets."""
