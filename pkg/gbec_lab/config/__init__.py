"""Configuration module"""

