"""Brute-force reference for the cluster learner, used only by tests.

Deliberately naive and dependency-free (plain lists, math.exp) so it shares
no code path with the package. Implements the no-fading regime: a cluster's
weight is exactly the number of samples it absorbed.

Rules:
  activation  H = exp(-d / w), d = L1 distance to the centroid
  winner      argmax H, first occurrence wins ties
  output      H_out = (H_w^beta / sum_s H_s^beta) * H_w  over the scored set
  recruit     when the label is new or H_out < tau; centroid := sample, w := 1
  update      centroid := (w*centroid + x) / (w + 1); w := w + 1
Learning competes within the taught label; classification competes globally.
"""

import math


class RefCluster:
    def __init__(self, cid, label, centroid):
        self.cid = cid
        self.label = label
        self.centroid = list(centroid)
        self.weight = 1.0


class RefNetwork:
    def __init__(self, tau, beta=1.0):
        self.tau = tau
        self.beta = beta
        self.clusters = []

    def _recruit(self, label, x):
        self.clusters.append(RefCluster(len(self.clusters), label, x))

    @staticmethod
    def _activation(cluster, x):
        d = sum(abs(c - v) for c, v in zip(cluster.centroid, x))
        return math.exp(-d / cluster.weight)

    def learn(self, label, x):
        cands = [c for c in self.clusters if c.label == label]
        if not cands:
            self._recruit(label, x)
            return
        acts = [self._activation(c, x) for c in cands]
        best = 0
        for i in range(1, len(acts)):
            if acts[i] > acts[best]:
                best = i
        denom = sum(a ** self.beta for a in acts)
        h_out = (acts[best] ** self.beta / denom) * acts[best]
        if h_out < self.tau:
            self._recruit(label, x)
            return
        win = cands[best]
        w = win.weight
        win.centroid = [(w * c + v) / (w + 1.0) for c, v in zip(win.centroid, x)]
        win.weight = w + 1.0

    def classify(self, x):
        best = None
        best_act = -1.0
        for c in self.clusters:  # insertion order == id order, so first max wins
            a = self._activation(c, x)
            if a > best_act:
                best_act = a
                best = c
        return best.label

    def cluster_counts(self):
        counts = {}
        for c in self.clusters:
            counts[c.label] = counts.get(c.label, 0) + 1
        return counts
