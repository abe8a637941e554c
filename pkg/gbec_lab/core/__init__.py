"""Geometry solvers and the exact-summation oracle"""
