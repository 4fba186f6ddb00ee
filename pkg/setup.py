from setuptools import find_packages, setup

setup(
    name='delib_agent',
    packages=find_packages(exclude=['tests']),
    package_data={'delib_agent.planner': ['*.pddl']},
    version='0.1.0',
    description='A deliberative plan, execute and monitor agent for household tasks.',
    author='Kostas',
    license='MIT',
    python_requires='>=3.8',
    install_requires=[
        'networkx', 'scipy', 'toolz', 'pyparsing', 'numba', 'numpy', 'pandas',
        'click', 'python-dotenv', 'PyYAML',
    ],
    entry_points={'console_scripts': ['delib=delib_agent.cli:cli']},
)
