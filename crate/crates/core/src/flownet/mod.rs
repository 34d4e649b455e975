//! Flow networks and the representation network of an embedding.

pub mod network;
pub mod rep_net;

pub use network::{extremize, feasible, flow_solves, min_cost, solve, Arc, ArcId, FlowError, Network, NodeId};
pub use rep_net::{bend_limits, build_network, dart_bounds, network_for_costs, NetworkError, PolePins, RepNetwork};
