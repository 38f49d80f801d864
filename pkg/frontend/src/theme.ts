/** Default color encoding: detector output in brown, corrected truth in
 * green, people blue, objects yellow, hover highlights orange. */

export const THEME = {
  detected: "#8f5a2a", // brown circles
  corrected: "#2f8f4e", // green squares
  person: "#3b78c3", // blue nodes
  object: "#e3b93c", // yellow nodes
  hover: "#f08414", // orange highlight
  link: "#7fb88f", // curved links at rest
  verdictTp: "#2f8f4e",
  verdictFp: "#c0392b",
  verdictUnreviewed: "#999999",
};
