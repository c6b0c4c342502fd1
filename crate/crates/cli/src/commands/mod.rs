mod construct;
mod gap;
mod schedule;
mod sdp;
mod verify;

pub use construct::construct;
pub use gap::gap;
pub use schedule::schedule;
pub use sdp::sdp;
pub use verify::verify;
